use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use bikefront::geometry::tangent_basis;
use bikefront::{inner, AmbientVector64, SurfaceModel, SurfacePoint, WaveFront64};
use serde::Serialize;

use crate::error::CliError;

/// Full round-trip precision (17 significant digits).
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Self { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("csv of utf-8 fields")
    }
}

pub const CURVE_COLUMNS: [&str; 14] = ["u", "x", "y", "z", "tx", "ty", "tz", "nx", "ny", "nz", "v", "w", "kappa", "sign"];

/// Sampled front: position, Legendrian frame, signed speed and turning rate.
pub fn curve_csv(w: &WaveFront64) -> String {
    let mut t = Table::new(&CURVE_COLUMNS);
    for i in 0..w.len() {
        let (p, e, n) = (w.positions[i], w.tangents[i], w.normals[i]);
        t.row(
            [
                w.param(i),
                p.x,
                p.y,
                p.z,
                e.x,
                e.y,
                e.z,
                n.x,
                n.y,
                n.z,
                w.signed_speed[i],
                w.turning[i],
                w.kappa[i],
                w.sign[i],
            ]
            .map(num),
        );
    }
    t.finish()
}

/// Reads a curve CSV back into a front. The model follows from `<p,p>` of
/// the first sample and the period from the uniform parameter step.
pub fn read_curve_csv(path: &Path) -> Result<WaveFront64, CliError> {
    let bad = |msg: String| CliError::Csv {
        path: path.to_path_buf(),
        msg,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(CURVE_COLUMNS.iter().copied()) {
        return Err(bad(format!("expected columns {}", CURVE_COLUMNS.join(","))));
    }
    let mut rows: Vec<[f64; 14]> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let mut row = [0.0; 14];
        for (k, field) in rec.iter().enumerate() {
            row[k] = field
                .trim()
                .parse()
                .map_err(|_| bad(format!("line {}: column {} is not a number: {field:?}", line + 2, CURVE_COLUMNS[k])))?;
        }
        rows.push(row);
    }
    if rows.len() < 4 {
        return Err(bad(format!("{} samples; need at least 4", rows.len())));
    }
    let v3 = |r: &[f64; 14], k: usize| AmbientVector64::new(r[k], r[k + 1], r[k + 2]);
    let p0 = v3(&rows[0], 1);
    let model = if (p0.dot(p0) - 1.0).abs() < 1e-6 {
        SurfaceModel::Sphere
    } else if (inner(p0, p0, SurfaceModel::Hyperbolic) + 1.0).abs() < 1e-6 * p0.dot(p0).max(1.0) && p0.z > 0.0 {
        SurfaceModel::Hyperbolic
    } else {
        return Err(bad("first sample is on neither the unit sphere nor the hyperboloid".into()));
    };
    let h = rows[1][0] - rows[0][0];
    if h <= 0.0 {
        return Err(bad("parameter column u must increase".into()));
    }
    let period = h * rows.len() as f64;
    let front = WaveFront64::from_frames(
        model,
        period,
        rows.iter().map(|r| v3(r, 1)).collect(),
        rows.iter().map(|r| v3(r, 4)).collect(),
        rows.iter().map(|r| v3(r, 7)).collect(),
        rows.iter().map(|r| r[10]).collect(),
        rows.iter().map(|r| r[11]).collect(),
        None,
    );
    Ok(front)
}

/// Planar display coordinates. Not isometric: stereographic projection from
/// the antipode of `center` on the sphere, the Poincare disk on the
/// hyperboloid.
pub struct Projection {
    model: SurfaceModel,
    frame: Option<(AmbientVector64, AmbientVector64, AmbientVector64)>,
}

impl Projection {
    pub fn new(model: SurfaceModel, center: Option<[f64; 3]>, fallback: &WaveFront64) -> Self {
        let frame = match model {
            SurfaceModel::Hyperbolic => None,
            SurfaceModel::Sphere => {
                let c = center.map(AmbientVector64::from_array).unwrap_or_else(|| {
                    fallback
                        .positions
                        .iter()
                        .fold(AmbientVector64::zero(), |acc, &p| acc + p)
                });
                let c = if c.dot(c) > 1e-24 { c } else { AmbientVector64::e3() };
                let b = c * (1.0 / c.dot(c).sqrt());
                let pt = SurfacePoint { v: b, model };
                let (e1, e2) = tangent_basis(&pt);
                Some((e1, e2, b))
            }
        };
        Self { model, frame }
    }

    pub fn map(&self, p: AmbientVector64) -> (f64, f64) {
        match (self.model, self.frame) {
            (SurfaceModel::Sphere, Some((e1, e2, b))) => {
                let z = 1.0 + p.dot(b);
                (p.dot(e1) / z, p.dot(e2) / z)
            }
            _ => (p.x / (1.0 + p.z), p.y / (1.0 + p.z)),
        }
    }
}

pub struct Layer<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub curve: &'a WaveFront64,
}

const SVG_SIZE: f64 = 600.0;

pub fn svg(proj: &Projection, layers: &[Layer]) -> String {
    let paths: Vec<Vec<(f64, f64)>> = layers
        .iter()
        .map(|l| l.curve.positions.iter().map(|&p| proj.map(p)).filter(|q| q.0.is_finite() && q.1.is_finite()).collect())
        .collect();
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for q in paths.iter().flatten() {
        lo = (lo.0.min(q.0), lo.1.min(q.1));
        hi = (hi.0.max(q.0), hi.1.max(q.1));
    }
    if proj.model == SurfaceModel::Hyperbolic {
        lo = (lo.0.min(-1.0), lo.1.min(-1.0));
        hi = (hi.0.max(1.0), hi.1.max(1.0));
    }
    if !lo.0.is_finite() {
        (lo, hi) = ((-1.0, -1.0), (1.0, 1.0));
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-12) * 1.1;
    let (cx, cy) = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
    let scale = SVG_SIZE / span;
    let to_px = |q: (f64, f64)| ((q.0 - cx) * scale + SVG_SIZE / 2.0, SVG_SIZE / 2.0 - (q.1 - cy) * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = SVG_SIZE
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if proj.model == SurfaceModel::Hyperbolic {
        let (x, y) = to_px((0.0, 0.0));
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="none" stroke="gray" stroke-dasharray="4 3"/>"#,
            scale
        );
    }
    for (k, (layer, path)) in layers.iter().zip(&paths).enumerate() {
        let pts: Vec<String> = path
            .iter()
            .map(|&q| {
                let (x, y) = to_px(q);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            pts.join(" "),
            layer.color
        );
        let _ = writeln!(
            out,
            r#"<text x="10" y="{}" font-family="sans-serif" font-size="14" fill="{}">{}</text>"#,
            20 + 18 * k,
            layer.color,
            layer.label
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bikefront::{build, CurveSpec};

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1.0 / 3.0, 6.02214076e23, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn curve_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for m in [SurfaceModel::Sphere, SurfaceModel::Hyperbolic] {
            let w = build::<f64>(&CurveSpec::polar_fourier(m, 0.9, vec![0.0, 0.03], vec![0.02], 256)).unwrap();
            let path = dir.path().join("c.csv");
            write_atomic(&path, curve_csv(&w).as_bytes()).unwrap();
            let back = read_curve_csv(&path).unwrap();
            assert_eq!(back.model, m);
            assert_eq!(back.positions, w.positions);
            assert_eq!(back.turning, w.turning);
            assert!((back.period - w.period).abs() < 1e-14);
        }
    }

    #[test]
    fn stereographic_center_maps_to_origin() {
        let w = build::<f64>(&CurveSpec::circle(SurfaceModel::Sphere, 0.5, 64)).unwrap();
        let proj = Projection::new(SurfaceModel::Sphere, Some([0.0, 0.0, 1.0]), &w);
        let (x, y) = proj.map(AmbientVector64::e3());
        assert!(x.abs() < 1e-15 && y.abs() < 1e-15);
        // a circle about the center stays a circle of radius tan(r/2)
        for &p in &w.positions {
            let (x, y) = proj.map(p);
            assert!(((x * x + y * y).sqrt() - 0.25f64.tan()).abs() < 1e-12);
        }
    }
}
