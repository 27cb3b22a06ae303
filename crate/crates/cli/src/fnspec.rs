//! Inline function specs.
//!
//! ```text
//! cos:3                      cos(3x)
//! sin:2                      sin(2x)
//! const:1.5                  constant (not mean-zero)
//! zero | zero:m=2            zero polynomial
//! prod(cos:3,cos:3)          tensor product, one factor per axis block
//! sum(cos:1,sin:4)           sum of same-dimension terms
//! lacunary:rho=1,smax=5      sum_s 2^{-rho s} prod_j cos(2^s x_j), s = 0..smax, m=1 default
//! random:n=8,decay=1,seed=3  real Gaussian polynomial of degree n, m=1 default
//! ```

use std::collections::BTreeMap;

use mixsmooth::verify::{lacunary, random_poly};
use mixsmooth::{Error, Result, TrigPoly64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn parse(spec: &str) -> Result<TrigPoly64> {
    let s = spec.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty function spec".into()));
    }
    for (head, combine) in [("prod(", Combine::Prod), ("sum(", Combine::Sum)] {
        if let Some(rest) = s.strip_prefix(head) {
            let inner = rest.strip_suffix(')').ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{s}`")))?;
            let parts = split_top(inner)?;
            if parts.is_empty() {
                return Err(Error::Parse(format!("`{s}` has no arguments")));
            }
            let polys = parts.iter().map(|p| parse(p)).collect::<Result<Vec<_>>>()?;
            return combine.apply(polys, s);
        }
    }
    let (name, args) = match s.split_once(':') {
        Some((n, a)) => (n, a),
        None => (s, ""),
    };
    let args = Args::parse(args, s)?;
    let poly = match name {
        "cos" | "sin" => {
            let a: i64 = args.positional(s)?;
            if name == "cos" {
                TrigPoly64::cos1(a)
            } else {
                TrigPoly64::sin1(a)
            }
        }
        "const" => {
            let c: f64 = args.positional(s)?;
            TrigPoly64::constant(args.get("m", 1usize)?, c)
        }
        "zero" => TrigPoly64::zeros(&vec![0; args.get("m", 1usize)?]),
        "lacunary" => {
            let smax: u32 = args.get("smax", 5)?;
            if smax > 7 {
                return Err(Error::Parse(format!("smax {smax} puts frequencies past the degree cap")));
            }
            lacunary(args.get("m", 1)?, args.get("rho", 1.0)?, smax)
        }
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.get("seed", 0)?);
            random_poly(args.get("m", 1)?, args.get("n", 8)?, args.get("decay", 1.0)?, &mut rng)
        }
        _ => return Err(Error::Parse(format!("unknown function `{name}` in `{s}`"))),
    };
    args.finish(s)?;
    if poly.dim() == 0 || poly.dim() > 3 {
        return Err(Error::Parse(format!("`{s}` has dimension {}, expected 1 to 3", poly.dim())));
    }
    Ok(poly)
}

#[derive(Clone, Copy)]
enum Combine {
    Prod,
    Sum,
}

impl Combine {
    fn apply(self, polys: Vec<TrigPoly64>, s: &str) -> Result<TrigPoly64> {
        match self {
            Combine::Prod => {
                let dim: usize = polys.iter().map(|p| p.dim()).sum();
                if dim > 3 {
                    return Err(Error::Parse(format!("`{s}` has dimension {dim}, expected 1 to 3")));
                }
                Ok(TrigPoly64::tensor_of(&polys))
            }
            Combine::Sum => {
                let dim = polys[0].dim();
                if let Some(p) = polys.iter().find(|p| p.dim() != dim) {
                    return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
                }
                let degree: Vec<usize> = (0..dim).map(|j| polys.iter().map(|p| p.degree()[j]).max().unwrap_or(0)).collect();
                Ok(polys.iter().fold(TrigPoly64::zeros(&degree), |acc, p| &acc + &p.resized(&degree)))
            }
        }
    }
}

/// Splits on commas outside parentheses; a bare `key=value` piece belongs to
/// the preceding argument list.
fn split_top(s: &str) -> Result<Vec<String>> {
    let mut raw = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
        }
        if c == ',' && depth == 0 {
            raw.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
    }
    raw.push(cur);
    let mut out: Vec<String> = Vec::new();
    for piece in raw {
        let bare_kv = piece.contains('=') && !piece.contains(':') && !piece.contains('(');
        match out.last_mut() {
            Some(prev) if bare_kv => {
                prev.push(',');
                prev.push_str(&piece);
            }
            _ => out.push(piece),
        }
    }
    Ok(out)
}

struct Args {
    positional: Option<String>,
    named: BTreeMap<String, String>,
    used: std::cell::RefCell<Vec<String>>,
}

impl Args {
    fn parse(text: &str, spec: &str) -> Result<Self> {
        let mut positional = None;
        let mut named = BTreeMap::new();
        for piece in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match piece.split_once('=') {
                Some((k, v)) => {
                    if named.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                        return Err(Error::Parse(format!("duplicate key `{k}` in `{spec}`")));
                    }
                }
                None if positional.is_none() => positional = Some(piece.to_string()),
                None => return Err(Error::Parse(format!("unexpected argument `{piece}` in `{spec}`"))),
            }
        }
        Ok(Args { positional, named, used: Default::default() })
    }

    fn positional<V: std::str::FromStr>(&self, spec: &str) -> Result<V> {
        let raw = self.positional.as_deref().ok_or_else(|| Error::Parse(format!("`{spec}` needs a value")))?;
        raw.parse().map_err(|_| Error::Parse(format!("bad value `{raw}` in `{spec}`")))
    }

    fn get<V: std::str::FromStr>(&self, key: &str, default: V) -> Result<V> {
        self.used.borrow_mut().push(key.to_string());
        match self.named.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| Error::Parse(format!("bad value `{raw}` for `{key}`"))),
        }
    }

    fn finish(&self, spec: &str) -> Result<()> {
        let used = self.used.borrow();
        match self.named.keys().find(|k| !used.contains(k)) {
            Some(k) => Err(Error::Parse(format!("unknown key `{k}` in `{spec}`"))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms() {
        let f = parse("cos:3").unwrap();
        assert_eq!(f.degree(), &[3]);
        assert_eq!(f.coeff(&[3]).re, 0.5);
        assert!(parse("zero").unwrap().is_zero());
        assert_eq!(parse("zero:m=2").unwrap().dim(), 2);
        assert!(!parse("const:1").unwrap().is_ring_member());
    }

    #[test]
    fn products_and_sums() {
        let f = parse("prod(cos:3,cos:3)").unwrap();
        assert_eq!(f.degree(), &[3, 3]);
        assert_eq!(f.coeff(&[3, -3]).re, 0.25);
        let g = parse("sum(cos:1,sin:4)").unwrap();
        assert_eq!(g.degree(), &[4]);
        let h = parse("prod(lacunary:rho=1,smax=2,cos:1)").unwrap();
        assert_eq!(h.degree(), &[4, 1]);
    }

    #[test]
    fn lacunary_defaults_to_one_axis() {
        let f = parse("lacunary:rho=1,smax=5").unwrap();
        assert_eq!(f.degree(), &[32]);
        assert_eq!(parse("lacunary:rho=1,smax=3,m=2").unwrap().degree(), &[8, 8]);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "cos", "cos:x", "tan:1", "prod(cos:1", "lacunary:rho=1,foo=2", "prod(cos:1,cos:1,cos:1,cos:1)", "sum(cos:1,zero:m=2)"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }
}
