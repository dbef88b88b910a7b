//! Parsers for the `--body` and `--set` mini-languages.
//!
//! Bodies: `simplex`, `triangle:a=2,b=1`, `rect:a=1,b=2`, `lp:p=2` (`p=inf`
//! for the square, optional `r=`), `graph:file=profile.csv` (rows `x,f(x)`).
//!
//! Sets: `ball`, `ball:r=2`, `polydisk:r1=1,r2=2`, `curve:file=h.csv`
//! (rows `r1,h(r1)`), and `product:AxB` where each factor is `disk(R)`,
//! `circle(R)` or `interval(LO,HI)`.

use std::collections::BTreeMap;
use std::path::Path;

use ctd_core::bodies::{Body, GraphProfile};
use ctd_core::compacta::{CircledSet2, Compact2, ModulusCurve, PlanarCompact, ProductSet};

use crate::CliError;

fn usage(msg: String) -> CliError {
    CliError::Usage(msg)
}

/// Splits `name:k=v,k=v` into the name and its parameters.
fn split_spec(spec: &str) -> Result<(&str, BTreeMap<&str, &str>), CliError> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = BTreeMap::new();
    for item in rest.split(',').filter(|s| !s.is_empty()) {
        let (k, v) =
            item.split_once('=').ok_or_else(|| usage(format!("expected key=value, got `{item}` in `{spec}`")))?;
        if params.insert(k.trim(), v.trim()).is_some() {
            return Err(usage(format!("parameter `{k}` given twice in `{spec}`")));
        }
    }
    Ok((name.trim(), params))
}

struct Params<'a> {
    spec: &'a str,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn take(&mut self, key: &str) -> Option<&'a str> {
        self.map.remove(key)
    }

    fn number(&mut self, key: &str) -> Result<Option<f64>, CliError> {
        self.take(key).map(|v| parse_number(v, key)).transpose()
    }

    fn required(&mut self, key: &str) -> Result<f64, CliError> {
        self.number(key)?.ok_or_else(|| usage(format!("missing `{key}=` in `{}`", self.spec)))
    }

    fn finish(self) -> Result<(), CliError> {
        match self.map.keys().next() {
            Some(k) => Err(usage(format!("unknown parameter `{k}` in `{}`", self.spec))),
            None => Ok(()),
        }
    }
}

fn parse_number(v: &str, what: &str) -> Result<f64, CliError> {
    match v.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        s => s.parse::<f64>().map_err(|_| usage(format!("invalid number `{v}` for `{what}`"))),
    }
}

/// Wraps a domain error from a constructor so it names the offending spec.
fn build<T>(spec: &str, r: ctd_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| usage(format!("`{spec}`: {e}")))
}

pub fn parse_body(spec: &str) -> Result<Body, CliError> {
    let (name, map) = split_spec(spec)?;
    let mut p = Params { spec, map };
    let body = match name {
        "simplex" => Body::simplex(),
        "triangle" => {
            let (a, b) = (p.required("a")?, p.required("b")?);
            build(spec, Body::triangle(a, b))?
        }
        "rect" | "rectangle" => {
            let (a, b) = (p.required("a")?, p.required("b")?);
            build(spec, Body::rectangle(a, b))?
        }
        "lp" => {
            let exp = p.required("p")?;
            let r = p.number("r")?.unwrap_or(1.0);
            build(spec, Body::lp_ball_with_radius(exp, r))?
        }
        "graph" => {
            let file = p.take("file").ok_or_else(|| usage(format!("missing `file=` in `{spec}`")))?;
            let (xs, fs) = read_pairs(Path::new(file))?;
            build(spec, GraphProfile::new(xs, fs).and_then(Body::graph))?
        }
        other => return Err(usage(format!("unknown body `{other}` in `{spec}`"))),
    };
    p.finish()?;
    Ok(body)
}

pub fn parse_set(spec: &str) -> Result<Compact2, CliError> {
    if let Some(rest) = spec.strip_prefix("product:") {
        return parse_product(spec, rest);
    }
    let (name, map) = split_spec(spec)?;
    let mut p = Params { spec, map };
    let set = match name {
        "ball" => {
            let r = p.number("r")?.unwrap_or(1.0);
            Compact2::Circled(build(spec, CircledSet2::ball(r))?)
        }
        "polydisk" => {
            let (r1, r2) = (p.required("r1")?, p.required("r2")?);
            Compact2::Circled(build(spec, CircledSet2::polydisk(r1, r2))?)
        }
        "curve" => {
            let file = p.take("file").ok_or_else(|| usage(format!("missing `file=` in `{spec}`")))?;
            let (r1, h) = read_pairs(Path::new(file))?;
            Compact2::Circled(CircledSet2::ModulusCurve(build(spec, ModulusCurve::new(r1, h))?))
        }
        other => return Err(usage(format!("unknown set `{other}` in `{spec}`"))),
    };
    p.finish()?;
    Ok(set)
}

fn parse_product(spec: &str, rest: &str) -> Result<Compact2, CliError> {
    // the separator is the `x` right after the first factor's closing paren
    let close = rest.find(')').ok_or_else(|| usage(format!("expected `AxB` in `{spec}`")))?;
    let (first, tail) = rest.split_at(close + 1);
    let second = tail.strip_prefix('x').ok_or_else(|| usage(format!("expected `x` after `{first}` in `{spec}`")))?;
    Ok(Compact2::Product(ProductSet::new(parse_factor(first)?, parse_factor(second)?)))
}

fn parse_factor(token: &str) -> Result<PlanarCompact, CliError> {
    let bad = || usage(format!("invalid factor `{token}`; expected disk(R), circle(R) or interval(LO,HI)"));
    let (name, args) = token.split_once('(').ok_or_else(bad)?;
    let args = args.strip_suffix(')').ok_or_else(bad)?;
    let nums = args.split(',').map(|a| parse_number(a.trim(), token)).collect::<Result<Vec<_>, _>>()?;
    let made = match (name.trim(), nums.as_slice()) {
        ("disk", [r]) => PlanarCompact::disk(*r),
        ("circle", [r]) => PlanarCompact::circle(*r),
        ("interval", [lo, hi]) => PlanarCompact::interval(*lo, *hi),
        _ => return Err(bad()),
    };
    build(token, made)
}

/// Reads two numeric columns; a non-numeric first row is taken as a header.
fn read_pairs(path: &Path) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| usage(format!("cannot read `{}`: {e}", path.display())))?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| usage(format!("`{}`: {e}", path.display())))?;
        let fields: Vec<&str> = record.iter().collect();
        let row = match fields.as_slice() {
            [x, y] => x.parse::<f64>().ok().zip(y.parse::<f64>().ok()),
            _ => None,
        };
        match row {
            Some((x, y)) => {
                xs.push(x);
                ys.push(y);
            }
            None if i == 0 => continue,
            None => {
                return Err(usage(format!("`{}` line {}: expected two numbers", path.display(), i + 1)));
            }
        }
    }
    Ok((xs, ys))
}

/// Radius of a ball set.
pub fn ball_radius(set: &Compact2) -> Option<f64> {
    match set {
        Compact2::Circled(CircledSet2::Ball { r }) => Some(*r),
        _ => None,
    }
}

/// The set as a product `E × F`; polydisks count as products of disks.
pub fn as_product(set: &Compact2) -> Option<ProductSet> {
    match set {
        Compact2::Product(p) => Some(p.clone()),
        Compact2::Circled(CircledSet2::Polydisk { r1, r2 }) => {
            Some(ProductSet::new(PlanarCompact::Disk { r: *r1 }, PlanarCompact::Disk { r: *r2 }))
        }
        Compact2::Circled(_) => None,
    }
}
