//! File formats: trace CSV with a JSON sidecar, envelope and dataset CSV,
//! and JSON scenes and models. Writes are atomic (temp file, then rename).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::classify::{FeatureVector, LabeledDataset, OvoSvmModel, FEATURE_DIM, FEATURE_NAMES};
use crate::dsp::Envelope;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sim::{GroundTruth, IqTrace, Scene};

pub const TRACE_SCHEMA_VERSION: u32 = 1;

/// Sidecar stored next to a trace CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta<F> {
    pub schema_version: u32,
    pub sample_rate: F,
    pub n_samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<GroundTruth>,
}

/// `trace.csv` → `trace.meta.json`.
pub fn sidecar_path(trace: &Path) -> PathBuf {
    trace.with_extension("meta.json")
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Data(format!("not a file path: {}", path.display())))?
        .to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| Error::Data(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, &to_json(value)?)
}

pub fn parse_json<T: DeserializeOwned>(text: &str, context: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        context: format!("{context}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    parse_json(&text, &path.display().to_string())
}

pub fn read_scene<F: Scalar>(path: &Path) -> Result<Scene<F>> {
    let scene: Scene<F> = read_json(path)?;
    scene.validate()?;
    Ok(scene)
}

pub fn read_model<F: Scalar>(path: &Path) -> Result<OvoSvmModel<F>> {
    read_json(path)
}

fn parse_error(path: &Path, line: Option<u64>, message: impl ToString) -> Error {
    Error::Parse {
        context: match line {
            Some(l) => format!("{}:{l}", path.display()),
            None => path.display().to_string(),
        },
        message: message.to_string(),
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line());
    parse_error(path, line, e)
}

fn parse_field<F: Scalar>(path: &Path, line: Option<u64>, column: &str, raw: &str) -> Result<F> {
    raw.trim()
        .parse::<f64>()
        .map(F::lit)
        .map_err(|e| parse_error(path, line, format!("column {column}: {e} ({raw:?})")))
}

fn write_csv<R: Serialize>(path: &Path, header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Data(e.to_string());
    w.write_record(header).map_err(io_err)?;
    for r in rows {
        w.serialize(r).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
    write_atomic(path, &bytes)
}

fn time_of<F: Scalar>(k: usize, fs: F) -> String {
    (F::from_usize_lossy(k) / fs).to_string()
}

/// Write `t,i,q` rows plus the sidecar.
pub fn write_trace<F: Scalar>(path: &Path, trace: &IqTrace<F>, seed: Option<u64>) -> Result<()> {
    let fs = trace.sample_rate;
    write_csv(
        path,
        &["t", "i", "q"],
        trace
            .i_samples
            .iter()
            .zip(&trace.q_samples)
            .enumerate()
            .map(|(k, (i, q))| (time_of(k, fs), i.to_string(), q.to_string())),
    )?;
    let meta = TraceMeta {
        schema_version: TRACE_SCHEMA_VERSION,
        sample_rate: fs,
        n_samples: trace.len(),
        seed,
        ground_truth: trace.ground_truth.clone(),
    };
    write_json(&sidecar_path(path), &meta)
}

/// Read a trace CSV; the sample rate comes from the sidecar when present,
/// otherwise from the spacing of the first two time stamps.
pub fn read_trace<F: Scalar>(path: &Path) -> Result<(IqTrace<F>, Option<TraceMeta<F>>)> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| parse_error(path, Some(1), format!("missing column {name:?}")))
    };
    let (ct, ci, cq) = (col("t")?, col("i")?, col("q")?);
    let mut t = Vec::new();
    let mut i = Vec::new();
    let mut q = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line());
        let get = |c: usize, name: &str| parse_field::<F>(path, line, name, rec.get(c).unwrap_or(""));
        t.push(get(ct, "t")?);
        i.push(get(ci, "i")?);
        q.push(get(cq, "q")?);
    }
    let side = sidecar_path(path);
    let meta: Option<TraceMeta<F>> = if side.exists() { Some(read_json(&side)?) } else { None };
    let sample_rate = match &meta {
        Some(m) => m.sample_rate,
        None if t.len() >= 2 && t[1] > t[0] => F::one() / (t[1] - t[0]),
        None => return Err(parse_error(path, None, "cannot infer sample rate without a sidecar")),
    };
    let mut trace = IqTrace::new(sample_rate, i, q)?;
    trace.ground_truth = meta.as_ref().and_then(|m| m.ground_truth.clone());
    Ok((trace, meta))
}

pub fn write_envelope<F: Scalar>(path: &Path, env: &Envelope<F>) -> Result<()> {
    let fs = env.sample_rate;
    write_csv(
        path,
        &["t", "amplitude"],
        env.samples()
            .iter()
            .enumerate()
            .map(|(k, a)| (time_of(k, fs), a.to_string())),
    )
}

pub fn write_dataset<F: Scalar>(path: &Path, ds: &LabeledDataset<F>) -> Result<()> {
    let mut header: Vec<&str> = FEATURE_NAMES.to_vec();
    header.push("label");
    write_csv(
        path,
        &header,
        ds.features.iter().zip(&ds.labels).map(|(f, &l)| {
            let mut row: Vec<String> = f.to_array().iter().map(|v| v.to_string()).collect();
            row.push(ds.classes[l].clone());
            row
        }),
    )
}

/// Read a feature CSV; classes are ordered by first appearance.
pub fn read_dataset<F: Scalar>(path: &Path) -> Result<LabeledDataset<F>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let mut cols = [0usize; FEATURE_DIM];
    for (slot, name) in cols.iter_mut().zip(FEATURE_NAMES) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| parse_error(path, Some(1), format!("missing column {name:?}")))?;
    }
    let label_col = headers
        .iter()
        .position(|h| h.trim() == "label")
        .ok_or_else(|| parse_error(path, Some(1), "missing column \"label\""))?;
    let mut ds = LabeledDataset::new(Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line());
        let mut v = [F::zero(); FEATURE_DIM];
        for ((slot, &c), name) in v.iter_mut().zip(&cols).zip(FEATURE_NAMES) {
            *slot = parse_field(path, line, name, rec.get(c).unwrap_or(""))?;
        }
        let label = rec.get(label_col).unwrap_or("").trim();
        if label.is_empty() {
            return Err(parse_error(path, line, "empty label"));
        }
        ds.push(FeatureVector::from_slice(&v)?, label);
    }
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::MotionKind;

    fn tmpdir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("motionfi-io-{tag}-{}", std::process::id()));
        fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn trace_round_trip() {
        let d = tmpdir("trace");
        let scene = MotionKind::Squat.scene(3, 1.0, 0.0, 5).unwrap();
        let tr = crate::sim::synth_cycles(&scene).unwrap();
        let p = d.join("t.csv");
        write_trace(&p, &tr, Some(5)).unwrap();
        let (back, meta) = read_trace::<f64>(&p).unwrap();
        assert_eq!(back, tr);
        assert_eq!(meta.unwrap().seed, Some(5));
        fs::remove_dir_all(d).unwrap();
    }

    #[test]
    fn dataset_round_trip_and_errors() {
        let d = tmpdir("ds");
        let mut ds = LabeledDataset::new(vec![]);
        ds.push(FeatureVector::from_slice(&[0.1; FEATURE_DIM]).unwrap(), "SQ");
        ds.push(FeatureVector::from_slice(&[0.3; FEATURE_DIM]).unwrap(), "PU");
        let p = d.join("ds.csv");
        write_dataset(&p, &ds).unwrap();
        assert_eq!(read_dataset::<f64>(&p).unwrap(), ds);

        let text = fs::read_to_string(&p).unwrap().replace("0.3,", "x,");
        fs::write(&p, text).unwrap();
        match read_dataset::<f64>(&p) {
            Err(Error::Parse { context, .. }) => assert!(context.ends_with(":3"), "{context}"),
            other => panic!("{other:?}"),
        }
        fs::remove_dir_all(d).unwrap();
    }

    #[test]
    fn scene_parse_error_has_context() {
        let err = parse_json::<Scene<f64>>("{\n  \"link\": 3\n}", "scene.json").unwrap_err();
        match err {
            Error::Parse { context, message } => {
                assert!(context.starts_with("scene.json:2:"), "{context}");
                assert!(message.contains("invalid type"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }
}
