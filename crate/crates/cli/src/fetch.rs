use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::Args;

use crate::Series;

pub const DEFAULT_BASE_URL: &str = "https://raw.githubusercontent.com/CSSEGISandData/COVID-19/master/csse_covid_19_data/csse_covid_19_time_series";

const MAX_BODY: u64 = 512 * 1024 * 1024;

#[derive(Debug, Clone, Args)]
pub struct FetchArgs {
    #[arg(value_enum)]
    pub series: Vec<Series>,
    /// Directory URL the upstream file names are appended to.
    #[arg(long, default_value = DEFAULT_BASE_URL)]
    pub base_url: String,
    /// Per-series override, `SERIES=URL`; may be repeated.
    #[arg(long = "url", value_name = "SERIES=URL", value_parser = parse_override)]
    pub urls: Vec<(Series, String)>,
    /// Copy from a local directory instead of downloading.
    #[arg(long, conflicts_with_all = ["base_url", "urls"])]
    pub from_dir: Option<PathBuf>,
    /// Request timeout in seconds.
    #[arg(long, default_value_t = 60)]
    pub timeout: u64,
}

fn parse_override(s: &str) -> Result<(Series, String), String> {
    let (name, url) = s.split_once('=').ok_or("expected SERIES=URL")?;
    let series = <Series as clap::ValueEnum>::from_str(name, true)?;
    Ok((series, url.to_string()))
}

pub fn default_url(base: &str, series: Series) -> String {
    format!("{}/{}", base.trim_end_matches('/'), series.file_name())
}

#[derive(Debug, Default)]
pub struct FetchReport {
    pub saved: Vec<(Series, PathBuf, usize)>,
    pub failures: Vec<(Series, anyhow::Error)>,
}

fn download(agent: &ureq::Agent, url: &str) -> Result<Vec<u8>> {
    let mut resp = agent
        .get(url)
        .call()
        .with_context(|| format!("GET {url}"))?;
    let body = resp
        .body_mut()
        .with_config()
        .limit(MAX_BODY)
        .read_to_vec()
        .with_context(|| format!("reading body of {url}"))?;
    Ok(body)
}

/// Writes through a temporary file in the same directory, then renames.
fn save_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    let dest = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&dest)
        .with_context(|| format!("cannot replace {}", dest.display()))?;
    Ok(dest)
}

/// Fetches every requested series concurrently. Failures are collected per
/// series; the others still complete.
pub fn cmd_fetch(data_dir: &Path, args: &FetchArgs, out: &mut dyn Write) -> Result<FetchReport> {
    let mut series = args.series.clone();
    series.sort();
    series.dedup();
    if series.is_empty() {
        return Ok(FetchReport::default());
    }
    fs::create_dir_all(data_dir)
        .with_context(|| format!("cannot create {}", data_dir.display()))?;
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_secs(args.timeout)))
        .build()
        .into();

    let fetch_one = |s: Series| -> Result<(PathBuf, usize)> {
        let bytes = match &args.from_dir {
            Some(dir) => {
                let src = dir.join(s.file_name());
                fs::read(&src).with_context(|| format!("cannot read {}", src.display()))?
            }
            None => {
                let url = args
                    .urls
                    .iter()
                    .rev()
                    .find(|(k, _)| *k == s)
                    .map(|(_, u)| u.clone())
                    .unwrap_or_else(|| default_url(&args.base_url, s));
                download(&agent, &url)?
            }
        };
        if bytes.is_empty() {
            bail!("empty response");
        }
        let path = save_atomic(data_dir, &s.file_name(), &bytes)?;
        Ok((path, bytes.len()))
    };

    let results: Vec<(Series, Result<(PathBuf, usize)>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = series
            .iter()
            .map(|&s| (s, scope.spawn(move || fetch_one(s))))
            .collect();
        handles
            .into_iter()
            .map(|(s, h)| {
                (
                    s,
                    h.join()
                        .unwrap_or_else(|_| Err(anyhow::anyhow!("fetch thread panicked"))),
                )
            })
            .collect()
    });

    let mut report = FetchReport::default();
    for (s, r) in results {
        match r {
            Ok((path, n)) => {
                writeln!(out, "{}: {} bytes -> {}", s.name(), n, path.display())?;
                report.saved.push((s, path, n));
            }
            Err(e) => report.failures.push((s, e)),
        }
    }
    Ok(report)
}
