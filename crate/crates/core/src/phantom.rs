//! Synthetic piecewise-constant test scene with an exactly known edge map.
//!
//! Layout for side `n`: a horizontal background ramp from 30 to 80, two squares (180 and
//! 130) in the upper half and a disc (200) in the lower half. Region contrasts are at least
//! ~50 grey levels everywhere along a boundary, while the ramp's slope stays far below any
//! sensible edge threshold. Ideal edges are the pixels with an 8-neighbour in a different
//! region, i.e. a two-pixel-thick contour straddling every boundary.

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::metrics::EdgeMap;

pub const MIN_SIDE: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct Phantom {
    pub clean: GrayImage,
    pub edges: EdgeMap,
}

fn region(n: usize, r: usize, c: usize) -> u8 {
    let nf = n as f64;
    let (rf, cf) = (r as f64 + 0.5, c as f64 + 0.5);
    let top = n / 8..3 * n / 8;
    if top.contains(&r) && (n / 8..3 * n / 8).contains(&c) {
        return 1;
    }
    if top.contains(&r) && (5 * n / 8..7 * n / 8).contains(&c) {
        return 2;
    }
    let (cy, cx, rad) = (0.66 * nf, 0.5 * nf, 0.2 * nf);
    if (rf - cy).powi(2) + (cf - cx).powi(2) <= rad * rad {
        return 3;
    }
    0
}

fn value(n: usize, label: u8, c: usize) -> f64 {
    match label {
        1 => 180.0,
        2 => 130.0,
        3 => 200.0,
        _ => 30.0 + 50.0 * c as f64 / (n - 1) as f64,
    }
}

pub fn phantom(side: usize) -> Result<Phantom> {
    if side < MIN_SIDE {
        return Err(Error::Parameter(format!(
            "phantom side must be at least {MIN_SIDE}, got {side}"
        )));
    }
    let labels: Vec<u8> = (0..side * side)
        .map(|i| region(side, i / side, i % side))
        .collect();
    let clean = GrayImage::from_fn(side, side, |r, c| value(side, labels[r * side + c], c))?;
    let mut edges = EdgeMap::empty(side, side)?;
    for r in 0..side {
        for c in 0..side {
            let here = labels[r * side + c];
            let boundary = (-1isize..=1).any(|dr| {
                (-1isize..=1).any(|dc| {
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    (0..side as isize).contains(&nr)
                        && (0..side as isize).contains(&nc)
                        && labels[nr as usize * side + nc as usize] != here
                })
            });
            edges.set(r, c, boundary);
        }
    }
    Ok(Phantom { clean, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{detect_edges, pratt_fom, FOM_ALPHA};

    #[test]
    fn deterministic_and_in_range() {
        let a = phantom(64).unwrap();
        assert_eq!(a, phantom(64).unwrap());
        let (lo, hi) = a.clean.min_max();
        assert!(lo >= 20.0 && hi <= 200.0);
        assert!(a.edges.count() > 0);
        assert!(phantom(16).is_err());
    }

    #[test]
    fn clean_edges_match_ideal_map() {
        let p = phantom(256).unwrap();
        let detected = detect_edges(&p.clean, 120.0).unwrap();
        let fom = pratt_fom(&detected, &p.edges, FOM_ALPHA).unwrap();
        assert!(fom > 0.95, "{fom}");
    }
}
