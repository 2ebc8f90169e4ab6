use std::path::Path;

use serde::Serialize;
use serde_json::json;

use despeckle::bench::{run_bench, BenchRow};
use despeckle::image::PgmMaxval;
use despeckle::metrics::{build_report, EdgeMap};
use despeckle::phantom::phantom;
use despeckle::pipeline::despeckle;
use despeckle::report::{to_csv, to_markdown, Precision};
use despeckle::speckle::apply_speckle;
use despeckle::GrayImage;

use crate::args::{BenchCmd, ConvertCmd, DespeckleCmd, MetricsCmd, PhantomCmd, SpeckleCmd};
use crate::error::{CliError, CliResult};
use crate::io::{manifest_path, read_edges, read_image, write_bytes, write_image};
use crate::settings::Settings;

fn maxval(s: &mut Settings, flag: Option<u32>) -> CliResult<PgmMaxval> {
    if let Some(m) = flag {
        s.maxval = m;
    }
    Ok(PgmMaxval::from_value(s.maxval)?)
}

fn write_manifest<T: Serialize>(output: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("manifest serialize") + "\n";
    write_bytes(&manifest_path(output), text.as_bytes())
}

pub fn speckle(cmd: &SpeckleCmd, mut s: Settings) -> CliResult<()> {
    cmd.speckle.apply(&mut s);
    let depth = maxval(&mut s, cmd.maxval)?;
    let spec = s.speckle()?;
    let clean = read_image(&cmd.input)?;
    let (noisy, _) = apply_speckle(&clean, &spec)?;
    write_image(&cmd.output, &noisy, depth)?;
    if let Some(p) = &cmd.pgm {
        write_image(p, &noisy, depth)?;
    }
    write_manifest(
        &cmd.output,
        &json!({
            "command": "speckle",
            "input": cmd.input.display().to_string(),
            "speckle": spec,
            "rows": noisy.rows(),
            "cols": noisy.cols(),
        }),
    )
}

pub fn despeckle_cmd(cmd: &DespeckleCmd, mut s: Settings) -> CliResult<()> {
    cmd.method.apply(&mut s);
    let depth = maxval(&mut s, cmd.maxval)?;
    let d = s.despeckler()?;
    let img = read_image(&cmd.input)?;
    let out = despeckle(&img, &d, &s.options())?;
    write_image(&cmd.output, &out.image, depth)?;
    if let Some(p) = &cmd.pgm {
        write_image(p, &out.image, depth)?;
    }
    write_manifest(
        &cmd.output,
        &json!({
            "command": "despeckle",
            "input": cmd.input.display().to_string(),
            "method": d.name(),
            "label": d.label(),
            "levels": s.levels,
            "noise": out.noise,
            "subbands": out.subbands,
            "settings": s,
        }),
    )
}

fn emit(text: &str, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(p) => write_bytes(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(
    rows: &[BenchRow],
    s: &Settings,
    precision: Precision,
    preamble: &str,
) -> CliResult<String> {
    match s.format.as_str() {
        "csv" => Ok(to_csv(rows, precision)?),
        "md" => Ok(to_markdown(rows, preamble)),
        other => Err(CliError::Usage(format!(
            "unknown format '{other}' (csv or md)"
        ))),
    }
}

pub fn metrics(cmd: &MetricsCmd, mut s: Settings) -> CliResult<()> {
    cmd.metrics.apply(&mut s);
    let settings = s.metrics()?;
    let speckled = read_image(&cmd.speckled)?;
    let despeckled = read_image(&cmd.despeckled)?;
    let ideal = read_edges(&cmd.edges)?;
    let row = BenchRow {
        label: cmd.label.clone(),
        method: cmd.label.clone(),
        is_reference: false,
        outcome: Ok(build_report(
            &speckled,
            &despeckled,
            &ideal,
            &settings,
            &cmd.label,
            None,
        )?),
    };
    let precision = if cmd.full_precision {
        Precision::Full
    } else {
        Precision::Short
    };
    let text = render(&[row], &s, precision, "")?;
    emit(&text, cmd.output.as_deref())
}

fn bench_scene(cmd: &BenchCmd, s: &mut Settings) -> CliResult<(GrayImage, EdgeMap, String)> {
    match (&cmd.clean, &cmd.edges) {
        (Some(clean), Some(edges)) => Ok((
            read_image(clean)?,
            read_edges(edges)?,
            format!(
                "clean scene `{}`, edges `{}`",
                clean.display(),
                edges.display()
            ),
        )),
        (None, None) => {
            if let Some(n) = cmd.phantom_size {
                s.phantom_size = n;
            }
            let p = phantom(s.phantom_size)?;
            Ok((
                p.clean,
                p.edges,
                format!("synthetic phantom {0}x{0}", s.phantom_size),
            ))
        }
        _ => Err(CliError::Usage("--clean and --edges go together".into())),
    }
}

pub fn bench(cmd: &BenchCmd, mut s: Settings) -> CliResult<()> {
    cmd.speckle.apply(&mut s);
    cmd.method.apply(&mut s);
    cmd.metrics.apply(&mut s);
    let (clean, ideal, scene) = bench_scene(cmd, &mut s)?;
    let cfg = s.bench()?;
    let outcome = run_bench(&clean, &ideal, &cfg)?;

    std::fs::create_dir_all(&cmd.out_dir).map_err(|e| CliError::File {
        path: cmd.out_dir.display().to_string(),
        source: e.into(),
    })?;
    let config_json = s.to_json();
    let preamble = format!(
        "Scene: {scene}. Speckle: {} (L = {}), seed {}.\n\nResolved configuration:\n\n```json\n{config_json}\n```\n",
        cfg.speckle.family.cli_name(),
        cfg.speckle.looks,
        cfg.speckle.seed,
    );
    let short = to_csv(&outcome.rows, Precision::Short)?;
    let full = to_csv(&outcome.rows, Precision::Full)?;
    let md = to_markdown(&outcome.rows, &preamble);
    write_bytes(&cmd.out_dir.join("bench.csv"), short.as_bytes())?;
    write_bytes(&cmd.out_dir.join("bench_full.csv"), full.as_bytes())?;
    write_bytes(&cmd.out_dir.join("bench.md"), md.as_bytes())?;
    write_bytes(
        &cmd.out_dir.join("bench.config.json"),
        (config_json + "\n").as_bytes(),
    )?;

    let text = render(&outcome.rows, &s, Precision::Short, &preamble)?;
    print!("{text}");
    Ok(())
}

pub fn convert(cmd: &ConvertCmd, mut s: Settings) -> CliResult<()> {
    let depth = maxval(&mut s, cmd.maxval)?;
    let img = read_image(&cmd.input)?;
    write_image(&cmd.output, &img, depth)
}

pub fn phantom_cmd(cmd: &PhantomCmd, mut s: Settings) -> CliResult<()> {
    let depth = maxval(&mut s, cmd.maxval)?;
    if let Some(n) = cmd.size {
        s.phantom_size = n;
    }
    let p = phantom(s.phantom_size)?;
    write_image(&cmd.output, &p.clean, depth)?;
    write_image(&cmd.edges_output, &p.edges.to_image(), depth)
}
