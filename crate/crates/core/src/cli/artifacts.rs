//! CSV artifact writers with pinned headers, plus atomic file writes
//! (temp + rename) so partially written artifacts never appear.

use crate::analysis::ResolventSweep;
use crate::operator::SpectrumPoint;
use crate::timeevo::EvolutionTrace;
use std::io::Write;
use std::path::Path;

pub const SWEEP_HEADER: &str = "gamma,resolvent_norm,gamma_times_norm";
pub const SPECTRUM_HEADER: &str = "re,im,block_index";
pub const EVOLVE_HEADER: &str = "t,energy,dissipation_1,dissipation_2,norm_ratio";
pub const GROWTH_HEADER: &str = "t,exp_norm";
pub const SMOOTHING_HEADER: &str = "t,smoothing_norm";

pub fn atomic_write(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(e) => format!("{}.tmp", e.to_string_lossy()),
        None => "tmp".to_string(),
    });
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

pub fn sweep_csv(sweep: &ResolventSweep) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for i in 0..sweep.len() {
        out.push_str(&format!(
            "{},{},{}\n",
            sweep.gamma[i], sweep.norm[i], sweep.gamma_times_norm[i]
        ));
    }
    out
}

/// Parse a sweep CSV produced by [`sweep_csv`] back into samples.
pub fn parse_sweep_csv(text: &str) -> Result<ResolventSweep, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty sweep CSV")?;
    if header.trim() != SWEEP_HEADER {
        return Err(format!(
            "unexpected sweep header '{header}', want '{SWEEP_HEADER}'"
        ));
    }
    let mut gamma = Vec::new();
    let mut norm = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(format!("line {}: expected 3 columns", k + 2));
        }
        let g: f64 = cols[0]
            .trim()
            .parse()
            .map_err(|e| format!("line {}: {e}", k + 2))?;
        let n: f64 = cols[1]
            .trim()
            .parse()
            .map_err(|e| format!("line {}: {e}", k + 2))?;
        gamma.push(g);
        norm.push(n);
    }
    if gamma.len() < 2 {
        return Err("sweep CSV holds fewer than 2 samples".into());
    }
    Ok(ResolventSweep::from_samples(gamma, norm, true, 0.0, 0))
}

pub fn spectrum_csv(points: &[SpectrumPoint]) -> String {
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!("{},{},{}\n", p.value.re, p.value.im, p.block));
    }
    out
}

pub fn series_csv(header: &str, times: &[f64], values: &[f64]) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for (t, v) in times.iter().zip(values.iter()) {
        out.push_str(&format!("{t},{v}\n"));
    }
    out
}

pub fn evolve_csv(trace: &EvolutionTrace, c0: f64) -> String {
    let mut out = String::from(EVOLVE_HEADER);
    out.push('\n');
    let norm0 = trace.energy.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    for i in 0..trace.times.len() {
        let t = trace.times[i];
        let ratio = if norm0 > 0.0 {
            trace.energy[i].max(0.0).sqrt() / ((2.0 * c0 * t).exp() * norm0)
        } else {
            0.0
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            t, trace.energy[i], trace.dissipation[i].0, trace.dissipation[i].1, ratio
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_csv_round_trips() {
        let sweep = ResolventSweep::from_samples(
            vec![1.0, 10.0, 100.0],
            vec![0.5, 0.05, 0.005],
            true,
            0.0,
            0,
        );
        let text = sweep_csv(&sweep);
        assert!(text.starts_with(SWEEP_HEADER));
        let back = parse_sweep_csv(&text).unwrap();
        assert_eq!(back.gamma, sweep.gamma);
        assert_eq!(back.norm, sweep.norm);
    }

    #[test]
    fn parse_rejects_bad_header() {
        assert!(parse_sweep_csv("nope\n1,2,3\n").is_err());
    }

    #[test]
    fn atomic_write_creates_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        atomic_write(&path, b"hello").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"hello");
        // no stray temp file
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert_eq!(entries.len(), 1);
    }
}
