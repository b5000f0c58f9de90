use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use nabla_dfc::GridFunction;
use serde::Deserialize;

#[derive(Deserialize)]
struct Row {
    t: i64,
    value: f64,
}

/// Reads a grid function from CSV (`t,value`, contiguous ascending `t`) or
/// JSON (`{"base": int, "values": [real]}`).
pub fn read_grid_function(path: &Path) -> Result<GridFunction> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('{');
    if is_json {
        return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
    }
    parse_csv(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn parse_csv(text: &str) -> Result<GridFunction> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "t" || &headers[1] != "value" {
        bail!(
            "expected header `t,value`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        );
    }
    let mut base = None;
    let mut values = Vec::new();
    for (line, row) in reader.deserialize::<Row>().enumerate() {
        let row = row?;
        let expected = base.map_or(row.t, |b: i64| b + values.len() as i64);
        if row.t != expected {
            bail!(
                "row {}: t = {} but expected {expected} (t must be contiguous and ascending)",
                line + 2,
                row.t
            );
        }
        base.get_or_insert(row.t);
        values.push(row.value);
    }
    let Some(base) = base else {
        bail!("no data rows")
    };
    Ok(GridFunction::new(base, values)?)
}

/// Parses `start:stop:n` into `n` evenly spaced points including both ends.
pub fn parse_grid_spec(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, n] = parts[..] else {
        return Err(format!("grid {spec:?} is not of the form start:stop:n"));
    };
    let start: f64 = start
        .trim()
        .parse()
        .map_err(|_| format!("bad grid start {start:?}"))?;
    let stop: f64 = stop
        .trim()
        .parse()
        .map_err(|_| format!("bad grid stop {stop:?}"))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("bad grid size {n:?}"))?;
    if n == 0 {
        return Err("grid needs at least one point".into());
    }
    if !(start > 0.0) || !(stop >= start) || !stop.is_finite() {
        return Err(format!("grid needs 0 < start ≤ stop, got {start}:{stop}"));
    }
    if n == 1 {
        return Ok(vec![start]);
    }
    if stop == start {
        return Err("a grid of several points needs stop > start".into());
    }
    let step = (stop - start) / (n - 1) as f64;
    Ok((0..n)
        .map(|k| {
            if k == n - 1 {
                stop
            } else {
                start + step * k as f64
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round() {
        let g = parse_csv("t,value\n2,1.5\n3,2\n4,-1\n").unwrap();
        assert_eq!(g.base(), 2);
        assert_eq!(g.values(), &[1.5, 2.0, -1.0]);
        assert!(parse_csv("t,value\n0,1\n2,1\n").is_err());
        assert!(parse_csv("x,y\n0,1\n").is_err());
        assert!(parse_csv("t,value\n").is_err());
    }

    #[test]
    fn grid_specs() {
        assert_eq!(
            parse_grid_spec("0.5:2:4").unwrap(),
            vec![0.5, 1.0, 1.5, 2.0]
        );
        assert_eq!(parse_grid_spec("1:1:1").unwrap(), vec![1.0]);
        assert!(parse_grid_spec("0:1:3").is_err());
        assert!(parse_grid_spec("1:2").is_err());
        assert!(parse_grid_spec("2:1:3").is_err());
    }
}
