//! CSV tables keyed by node index. Floats are written with 17 significant digits so
//! values survive a round trip exactly.

use std::io::{Read, Write};

use crate::density::{Host, SampledDensity};
use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

fn g<T: Real>(x: T) -> String {
    format!("{:.16e}", x.to_f64_lossy())
}

/// `index,s,re_z,im_z,re_tangent,im_tangent`.
pub fn write_node_table<T: Real>(host: Host<'_, T>, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "index,s,re_z,im_z,re_tangent,im_tangent")?;
    for (k, z) in host.nodes().iter().enumerate() {
        let t = host.tangent(k);
        writeln!(w, "{k},{},{},{},{},{}", g(host.arclength(k)), g(z.re), g(z.im), g(t.re), g(t.im))?;
    }
    Ok(())
}

/// `index,re_f,im_f`.
pub fn write_density<T: Real>(f: &SampledDensity<'_, T>, mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "index,re_f,im_f")?;
    for (k, v) in f.values().iter().enumerate() {
        writeln!(w, "{k},{},{}", g(v.re), g(v.im))?;
    }
    Ok(())
}

/// `index,s,re_z,im_z,re_f,im_f`.
pub fn write_solution<T: Real>(f: &SampledDensity<'_, T>, mut w: impl Write) -> std::io::Result<()> {
    let host = f.host();
    writeln!(w, "index,s,re_z,im_z,re_f,im_f")?;
    for (k, (z, v)) in host.nodes().iter().zip(f.values()).enumerate() {
        writeln!(w, "{k},{},{},{},{},{}", g(host.arclength(k)), g(z.re), g(z.im), g(v.re), g(v.im))?;
    }
    Ok(())
}

/// Reads node values from any CSV with `index`, `re_f` and `im_f` columns (extra
/// columns are ignored). Every index in `0..expected` must appear exactly once.
pub fn read_density_values<T: Real>(reader: impl Read, expected: usize) -> Result<Vec<Cx<T>>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Invalid(format!("line 1: {e}")))?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Invalid(format!("line 1: missing column `{name}`")))
    };
    let (ci, cr, cim) = (col("index")?, col("re_f")?, col("im_f")?);
    let mut out: Vec<Option<Cx<T>>> = vec![None; expected];
    for (row, rec) in rdr.records().enumerate() {
        let line = row + 2;
        let rec = rec.map_err(|e| Error::Invalid(format!("line {line}: {e}")))?;
        let field = |c: usize| rec.get(c).ok_or_else(|| Error::Invalid(format!("line {line}: too few fields")));
        let idx: usize = field(ci)?.parse().map_err(|_| Error::Invalid(format!("line {line}: bad index")))?;
        let num = |c: usize| -> Result<f64> {
            field(c)?
                .parse()
                .map_err(|_| Error::Invalid(format!("line {line}: bad number `{}`", rec.get(c).unwrap_or(""))))
        };
        let v = cx(T::lit(num(cr)?), T::lit(num(cim)?));
        match out.get_mut(idx) {
            Some(slot @ None) => *slot = Some(v),
            Some(Some(_)) => return Err(Error::Invalid(format!("line {line}: index {idx} repeated"))),
            None => return Err(Error::Alignment { expected, got: idx + 1 }),
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| Error::Invalid(format!("node {k} missing from table"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ClosedContour;

    #[test]
    fn solution_round_trip_is_exact() {
        let circ = ClosedContour::circle(cx(0.0, 0.0), 1.0, 4, 4).unwrap();
        let f = SampledDensity::from_fn(&circ, |t| t.exp() / 3.0).unwrap();
        let mut buf = Vec::new();
        write_solution(&f, &mut buf).unwrap();
        let back = read_density_values::<f64>(&buf[..], 16).unwrap();
        assert_eq!(back, f.values());
        let mut nodes = Vec::new();
        write_node_table(f.host(), &mut nodes).unwrap();
        assert_eq!(String::from_utf8(nodes).unwrap().lines().count(), 17);
    }

    #[test]
    fn bad_rows_report_their_line() {
        let text = "index,re_f,im_f\n0,1,0\n1,x,0\n";
        let err = read_density_values::<f64>(text.as_bytes(), 2).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }
}
