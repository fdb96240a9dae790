//! Readers and writers shared by the commands.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use unmask_core::{load_dist, CurveMethod, InfoCurve, JointPmf, Schedule};

use crate::{ScheduleArgs, Usage};

pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load(path: &Path) -> Result<JointPmf> {
    let text = read_text(path)?;
    load_dist(&text).with_context(|| format!("loading {}", path.display()))
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for row in rows {
        let _ = writeln!(s, "{}", row.join(","));
    }
    s
}

/// `f64` as CSV text; `Display` is locale-free and round-trips.
pub fn num(x: f64) -> String {
    format!("{}", x + 0.0)
}

/// NaN and infinities become JSON `null`.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x + 0.0)
}

/// The `curve` command's JSON form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveFile {
    pub method: CurveMethod,
    pub n: usize,
    pub z_bits: Vec<f64>,
    /// `H_1..H_n`.
    pub h_bits: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_stderr: Option<Vec<Option<f64>>>,
}

impl CurveFile {
    pub fn to_csv(&self) -> String {
        let header = if self.z_stderr.is_some() { "j,Z_bits,H_bits,Z_stderr" } else { "j,Z_bits,H_bits" };
        let rows = (0..self.n).map(|i| {
            let mut row = vec![(i + 1).to_string(), num(self.z_bits[i]), num(self.h_bits[i])];
            if let Some(se) = &self.z_stderr {
                row.push(se[i].map_or_else(|| "NaN".into(), num));
            }
            row
        });
        csv(header, rows)
    }
}

/// Reads a curve written by `curve` in either format.
pub fn read_curve(path: &Path) -> Result<InfoCurve> {
    let text = read_text(path)?;
    let z = if text.trim_start().starts_with('{') {
        let file: CurveFile = serde_json::from_str(&text)
            .map_err(|e| Usage(format!("{}: not a curve file: {e}", path.display())))?;
        file.z_bits
    } else {
        parse_curve_csv(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?
    };
    InfoCurve::new(z).with_context(|| format!("curve in {}", path.display()))
}

fn parse_curve_csv(text: &str) -> std::result::Result<Vec<f64>, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or("empty curve file")?.split(',').map(str::trim).collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let (jc, zc) = match (col("j"), col("Z_bits")) {
        (Some(j), Some(z)) => (j, z),
        _ => return Err("curve CSV needs columns j and Z_bits".into()),
    };
    let mut z = Vec::new();
    for (row, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let j: usize = cells.get(jc).and_then(|c| c.parse().ok()).ok_or(format!("bad j in row {}", row + 1))?;
        if j != row + 1 {
            return Err(format!("row {} has j = {j}", row + 1));
        }
        let v: f64 = cells.get(zc).and_then(|c| c.parse().ok()).ok_or(format!("bad Z_bits in row {}", row + 1))?;
        z.push(v);
    }
    Ok(z)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScheduleDoc {
    Bare(Schedule),
    Report { schedule: Schedule },
    Sweep { best: Box<ScheduleDoc> },
}

impl ScheduleDoc {
    fn into_schedule(self) -> Schedule {
        match self {
            ScheduleDoc::Bare(s) | ScheduleDoc::Report { schedule: s } => s,
            ScheduleDoc::Sweep { best } => best.into_schedule(),
        }
    }
}

/// Reads `{"steps":[..]}`, or the `schedule` of a plan report, or the best
/// plan of a sweep report.
pub fn read_schedule(path: &Path) -> Result<Schedule> {
    let text = read_text(path)?;
    let doc: ScheduleDoc = serde_json::from_str(&text)
        .map_err(|_| Usage(format!("{}: no schedule found", path.display())))?;
    Ok(doc.into_schedule())
}

pub fn schedule_arg(args: &ScheduleArgs) -> Result<Option<Schedule>> {
    match (&args.schedule, &args.steps) {
        (Some(path), None) => Ok(Some(read_schedule(path)?)),
        (None, Some(steps)) => Ok(Some(Schedule::new(steps.clone())?)),
        (None, None) => Ok(None),
        (Some(_), Some(_)) => Err(Usage("give --schedule or --steps, not both".into()).into()),
    }
}

/// `0,1;2,3` → `[[0,1],[2,3]]`.
pub fn parse_blocks(text: &str) -> Result<Vec<Vec<usize>>> {
    text.split(';')
        .map(|block| {
            block
                .split(',')
                .map(|v| v.trim().parse::<usize>().map_err(|_| Usage(format!("bad position {v:?} in --blocks")).into()))
                .collect()
        })
        .collect()
}

pub fn tuple_lines(samples: &[Vec<usize>]) -> String {
    let mut s = String::new();
    for t in samples {
        let cells: Vec<String> = t.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}
