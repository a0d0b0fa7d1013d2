use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::{flatten_toml, RunConfig};
use super::runner::{AggregateResult, GridSearchReport, SweepPoint};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "round,mean_cum_reward,std_cum_reward,mean_cum_regret,std_cum_regret";

pub fn aggregate_csv(result: &AggregateResult) -> String {
    let mut s = String::with_capacity(64 * (result.rounds.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for i in 0..result.rounds.len() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            result.rounds[i],
            result.mean_cum_reward[i],
            result.std_cum_reward[i],
            result.mean_cum_regret[i],
            result.std_cum_regret[i]
        );
    }
    s
}

pub fn grid_search_csv(report: &GridSearchReport) -> String {
    let mut s = String::from("algorithm,multiplier,mean_final_reward,std_final_reward,selected\n");
    for e in &report.entries {
        let selected = report.best_for(&e.algorithm) == Some(e.multiplier);
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            e.algorithm, e.multiplier, e.mean_final_reward, e.std_final_reward, selected
        );
    }
    s
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut s = String::from(
        "horizon,algorithm,partitions,mean_final_regret,std_final_regret,time_avg_regret,time_avg_regret_se,mean_final_reward,std_final_reward\n",
    );
    for p in points {
        for r in &p.results {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                p.horizon,
                r.algorithm,
                r.partitions.map(|m| m.to_string()).unwrap_or_default(),
                r.final_mean_regret(),
                r.final_std_regret(),
                r.final_mean_regret() / p.horizon as f64,
                r.time_avg_regret_se(),
                r.final_mean_reward(),
                r.final_std_reward()
            );
        }
    }
    s
}

fn result_lines(s: &mut String, r: &AggregateResult) {
    let _ = writeln!(s, "[{} T={}]", r.algorithm, r.horizon);
    if let Some(m) = r.partitions {
        let _ = writeln!(s, "partitions = {m}");
    }
    let _ = writeln!(s, "final_mean_cum_reward = {}", r.final_mean_reward());
    let _ = writeln!(s, "final_std_cum_reward = {}", r.final_std_reward());
    let _ = writeln!(s, "final_mean_cum_regret = {}", r.final_mean_regret());
    let _ = writeln!(s, "final_std_cum_regret = {}", r.final_std_regret());
}

/// Plain-text run summary: version, every key of the input file, the
/// effective seeds and stride, then `body`. Contains no timing, so reruns
/// produce identical bytes.
pub fn summary_text(command: &str, config_text: &str, config: &RunConfig, body: &str) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(s, "cmab {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "command = {command}");
    s.push_str("\n[input]\n");
    for (k, v) in flatten_toml(config_text)? {
        let _ = writeln!(s, "{k} = {v}");
    }
    s.push_str("\n[effective]\n");
    let _ = writeln!(s, "horizon = {}", config.horizon);
    let _ = writeln!(s, "repetitions = {}", config.repetitions);
    let seeds: Vec<String> = config.seeds().iter().map(u64::to_string).collect();
    let _ = writeln!(s, "seeds = {}", seeds.join(","));
    match config.stride {
        Some(v) => {
            let _ = writeln!(s, "stride = {v}");
        }
        None => {
            let _ = writeln!(s, "stride = max(1, horizon / 1000) = {}", config.effective_stride());
        }
    }
    let _ = writeln!(s, "oracle.resolution = {}", config.oracle.resolution);
    let _ = writeln!(s, "oracle.tolerance = {}", config.oracle.tolerance);
    s.push('\n');
    s.push_str(body);
    Ok(s)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// `<label>.csv` per algorithm plus `summary.txt`.
pub fn write_run(
    dir: &Path,
    config_text: &str,
    config: &RunConfig,
    results: &[AggregateResult],
) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut paths = Vec::new();
    let mut body = String::new();
    for r in results {
        paths.push(write_file(dir, &format!("{}.csv", r.algorithm), &aggregate_csv(r))?);
        result_lines(&mut body, r);
    }
    let summary = summary_text("run", config_text, config, &body)?;
    paths.push(write_file(dir, "summary.txt", &summary)?);
    Ok(paths)
}

pub fn write_grid_search(
    dir: &Path,
    config_text: &str,
    config: &RunConfig,
    report: &GridSearchReport,
) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut body = String::from("[grid-search]\n");
    let ms: Vec<String> = report.multipliers.iter().map(f64::to_string).collect();
    let _ = writeln!(body, "multipliers = {}", ms.join(","));
    for (a, m) in &report.best {
        let _ = writeln!(body, "best.{a} = {m}");
    }
    Ok(vec![
        write_file(dir, "grid_search.csv", &grid_search_csv(report))?,
        write_file(dir, "summary.txt", &summary_text("grid-search", config_text, config, &body)?)?,
    ])
}

pub fn write_sweep(
    dir: &Path,
    config_text: &str,
    config: &RunConfig,
    points: &[SweepPoint],
) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut body = String::new();
    let hs: Vec<String> = points.iter().map(|p| p.horizon.to_string()).collect();
    let _ = writeln!(body, "[sweep]\nhorizons = {}\n", hs.join(","));
    for p in points {
        for r in &p.results {
            result_lines(&mut body, r);
        }
    }
    Ok(vec![
        write_file(dir, "sweep.csv", &sweep_csv(points))?,
        write_file(dir, "summary.txt", &summary_text("sweep", config_text, config, &body)?)?,
    ])
}
