//! CSV snapshots of nodal states.
//!
//! The first line is `#` followed by a JSON object with the element count,
//! nodes per direction, dimension, time and variable names. Each following
//! row holds `element, node, x[, y], <variables>`.

use std::io::Write;

use serde_json::json;

use super::SemiDiscretization;
use crate::error::{Error, Result};

pub fn write_snapshot<W: Write>(
    sd: &dyn SemiDiscretization,
    u: &[f64],
    t: f64,
    mut out: W,
) -> Result<()> {
    if u.len() != sd.len() {
        return Err(Error::ShapeMismatch(format!(
            "state length {}, expected {}",
            u.len(),
            sd.len()
        )));
    }
    let names = sd.equation().variable_names();
    let header = json!({
        "J": sd.elements(),
        "N": sd.nodes_per_direction(),
        "dim": sd.dim(),
        "time": t,
        "variables": names,
    });
    writeln!(out, "#{header}")?;
    let mut w = csv::Writer::from_writer(out);
    let mut cols = vec!["element".to_string(), "node".to_string(), "x".to_string()];
    if sd.dim() == 2 {
        cols.push("y".into());
    }
    cols.extend(names.iter().map(|s| s.to_string()));
    w.write_record(&cols).map_err(csv_err)?;
    let (nv, np) = (sd.nvars(), sd.npts());
    for (k, x) in sd.coordinates().iter().enumerate() {
        let (e, i) = (k / np, k % np);
        let mut row = vec![e.to_string(), i.to_string()];
        row.extend(x[..sd.dim()].iter().map(|c| c.to_string()));
        row.extend((0..nv).map(|v| u[(e * nv + v) * np + i].to_string()));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_lgl_usbp;
    use crate::physics::{advection_splitting, Equation};
    use crate::semidisc::{Boundary, Coupling, Dg1d, Mesh1D};

    #[test]
    fn header_and_rows() {
        let sd = Dg1d::new(
            Mesh1D::new(0.0, 1.0, 2).unwrap(),
            &build_lgl_usbp(3, -1.0).unwrap(),
            Equation::advection_1d(),
            Coupling::Upwind(advection_splitting(1.0).unwrap()),
            Boundary::Periodic,
        )
        .unwrap();
        let u: Vec<f64> = (0..6).map(f64::from).collect();
        let mut buf = Vec::new();
        write_snapshot(&sd, &u, 0.5, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let header: serde_json::Value = serde_json::from_str(&lines[0][1..]).unwrap();
        assert_eq!(header["J"], 2);
        assert_eq!(header["variables"][0], "u");
        assert_eq!(lines[1], "element,node,x,u");
        assert_eq!(lines[5], "1,0,0.5,3");
        assert_eq!(lines.len(), 8);
        assert!(write_snapshot(&sd, &u[..3], 0.0, Vec::new()).is_err());
    }
}
