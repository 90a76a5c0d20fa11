use std::io::{Read, Write};

use crate::{GeomError, RadialProfile, Result, WarpedHalfPlaneMetric};

pub const PROFILE_HEADER: [&str; 3] = ["r", "phi", "f"];
pub const GRID_HEADER: [&str; 7] = ["u", "v", "g_uu", "g_uv", "g_vv", "phi", "f"];

fn num(x: f64) -> String {
    format!("{x:e}")
}

/// One row per radial sample: `r, phi, f`.
pub fn write_profile_csv<W: Write>(p: &RadialProfile, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PROFILE_HEADER)?;
    for k in 0..p.len() {
        w.write_record([num(p.grid()[k]), num(p.warp()[k]), num(p.potential()[k])])?;
    }
    w.flush().map_err(|e| GeomError::Csv(e.to_string()))
}

/// Inverse of [`write_profile_csv`]; derivatives are re-differenced.
pub fn read_profile_csv<R: Read>(n: usize, input: R) -> Result<RadialProfile> {
    let mut rd = csv::Reader::from_reader(input);
    check_header(rd.headers()?, &PROFILE_HEADER)?;
    let (mut r, mut phi, mut f) = (vec![], vec![], vec![]);
    for rec in rd.records() {
        let rec = rec?;
        r.push(parse(&rec, 0)?);
        phi.push(parse(&rec, 1)?);
        f.push(parse(&rec, 2)?);
    }
    RadialProfile::from_samples(n, r, phi, f)
}

/// One row per lattice node, `u` outer and `v` inner.
pub fn write_grid_csv<W: Write>(m: &WarpedHalfPlaneMetric, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GRID_HEADER)?;
    let (nu, nv) = m.shape();
    for i in 0..nu {
        for j in 0..nv {
            let k = m.idx(i, j);
            w.write_record([
                num(m.u(i)),
                num(m.v(j)),
                num(m.g_uu()[k]),
                num(m.g_uv()[k]),
                num(m.g_vv()[k]),
                num(m.phi()[k]),
                num(m.potential()[k]),
            ])?;
        }
    }
    w.flush().map_err(|e| GeomError::Csv(e.to_string()))
}

/// Inverse of [`write_grid_csv`]; spacing is recovered from the first rows.
pub fn read_grid_csv<R: Read>(input: R) -> Result<WarpedHalfPlaneMetric> {
    let mut rd = csv::Reader::from_reader(input);
    check_header(rd.headers()?, &GRID_HEADER)?;
    let mut cols: [Vec<f64>; 7] = Default::default();
    for rec in rd.records() {
        let rec = rec?;
        for (c, col) in cols.iter_mut().enumerate() {
            col.push(parse(&rec, c)?);
        }
    }
    let u = &cols[0];
    let v = &cols[1];
    if u.len() < 2 {
        return Err(GeomError::TooFewSamples { needed: 16, got: u.len() });
    }
    let nv = u.iter().take_while(|x| **x == u[0]).count();
    if nv == 0 || u.len() % nv != 0 {
        return Err(GeomError::Csv("grid rows are not a full lattice".into()));
    }
    let nu = u.len() / nv;
    let hv = if nv > 1 { v[1] - v[0] } else { 1.0 };
    let hu = if nu > 1 { u[nv] - u[0] } else { 1.0 };
    let [_, _, guu, guv, gvv, phi, f] = cols.clone();
    WarpedHalfPlaneMetric::new((u[0], hu, nu), (v[0], hv, nv), guu, guv, gvv, phi, f)
}

fn check_header(h: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    let got: Vec<&str> = h.iter().collect();
    if got != expected {
        return Err(GeomError::Csv(format!("header {got:?}, expected {expected:?}")));
    }
    Ok(())
}

fn parse(rec: &csv::StringRecord, c: usize) -> Result<f64> {
    rec.get(c)
        .ok_or_else(|| GeomError::Csv(format!("missing column {c}")))?
        .trim()
        .parse()
        .map_err(|e| GeomError::Csv(format!("column {c}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_round_trip() {
        let g: Vec<f64> = (0..20).map(|k| k as f64 * 0.1).collect();
        let phi = g.iter().map(|r| (r / 2.0).tanh() * 2.0).collect();
        let f = g.iter().map(|r| r * r).collect();
        let p = RadialProfile::from_samples(2, g, phi, f).unwrap();
        let mut buf = vec![];
        write_profile_csv(&p, &mut buf).unwrap();
        assert!(buf.starts_with(b"r,phi,f\n"));
        let q = read_profile_csv(2, buf.as_slice()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn grid_round_trip() {
        let (nu, nv) = (5, 6);
        let n = nu * nv;
        let phi: Vec<f64> = (0..n).map(|k| 0.25 * (k % nv) as f64).collect();
        let m = WarpedHalfPlaneMetric::new(
            (-0.5, 0.25, nu),
            (0.0, 0.25, nv),
            vec![1.0; n],
            vec![0.0; n],
            vec![1.5; n],
            phi,
            vec![0.1; n],
        )
        .unwrap();
        let mut buf = vec![];
        write_grid_csv(&m, &mut buf).unwrap();
        assert!(buf.starts_with(b"u,v,g_uu,g_uv,g_vv,phi,f\n"));
        assert_eq!(read_grid_csv(buf.as_slice()).unwrap(), m);
    }
}
