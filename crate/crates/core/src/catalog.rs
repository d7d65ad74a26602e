//! Built-in small groups.
//!
//! Names: `Z2`…`Z12` (any `Zn` resolves), `D3`…`D6` (order `2n`), `Q8`,
//! `A4`, `S3`, `S4`, and direct products written `AxB` or `AxBxC`.
//! Permutation groups are labelled in one-based cycle notation (`e`,
//! `(12)`, `(123)`, `(12)(34)`), products as `(a,b)`.

use crate::division::HyperNumber;
use crate::error::{Error, Result};
use crate::perm::{self, Perm};
use crate::transversal::FiniteGroup;

/// Largest order a catalog name may resolve to.
pub const MAX_CATALOG_ORDER: usize = 24;

/// Catalog groups of order at most 12, swept exhaustively.
pub const SMALL: &[&str] = &[
    "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z11", "Z12", "S3", "D3", "D4", "D5",
    "D6", "Q8", "A4", "Z2xZ2", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3", "Z2xZ6", "Z2xS3",
];

/// Catalog groups of order 13 to 24, swept by sampling.
pub const LARGE: &[&str] = &[
    "S4", "Z2xD4", "Z2xQ8", "Z3xS3", "Z4xS3", "Z2xA4", "Z2xD6", "Z2xZ2xS3",
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SMALL.iter().chain(LARGE).copied()
}

pub fn group(name: &str) -> Result<FiniteGroup> {
    let unknown = || Error::UnknownGroup(name.to_string());
    if name.contains('x') {
        let mut parts = name.split('x');
        let first = parts.next().ok_or_else(unknown)?;
        let mut g = group(first)?;
        for part in parts {
            let h = group(part)?;
            if g.order() * h.order() > MAX_CATALOG_ORDER {
                return Err(Error::CapExceeded {
                    what: "catalog group order",
                    value: g.order() * h.order(),
                    cap: MAX_CATALOG_ORDER,
                });
            }
            g = FiniteGroup::direct_product(&g, &h);
        }
        return Ok(g);
    }
    let parse_n = |s: &str| s.parse::<usize>().map_err(|_| unknown());
    match name {
        "Q8" => Ok(quaternion_group()),
        _ if name.starts_with('Z') => {
            let n = parse_n(&name[1..])?;
            if n == 0 || n > MAX_CATALOG_ORDER {
                return Err(unknown());
            }
            Ok(cyclic(n))
        }
        _ if name.starts_with('S') => match parse_n(&name[1..])? {
            n @ 1..=4 => Ok(symmetric(n)),
            _ => Err(unknown()),
        },
        _ if name.starts_with('A') => match parse_n(&name[1..])? {
            n @ 1..=4 => Ok(alternating(n)),
            _ => Err(unknown()),
        },
        _ if name.starts_with('D') => match parse_n(&name[1..])? {
            n @ 3..=12 => Ok(dihedral(n)),
            _ => Err(unknown()),
        },
        _ => Err(unknown()),
    }
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let labels = (0..n).map(|i| i.to_string()).collect();
    FiniteGroup::from_table(labels, &table, 0).expect("cyclic table is a group")
}

/// One-based cycle notation; points below 10 are written without separators.
pub fn cycle_label(p: &Perm) -> String {
    let cycles = p.cycles();
    if cycles.is_empty() {
        return "e".to_string();
    }
    let sep = if p.degree() > 9 { "," } else { "" };
    cycles
        .iter()
        .map(|c| {
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            format!("({})", pts.join(sep))
        })
        .collect()
}

fn from_generators(degree: usize, gens: &[Perm]) -> FiniteGroup {
    let g = perm::generate(degree, gens).expect("catalog groups are small");
    FiniteGroup::from_perm_group(&g, cycle_label)
}

pub fn symmetric(n: usize) -> FiniteGroup {
    let mut gens = Vec::new();
    if n >= 2 {
        gens.push(Perm::transposition(n, 0, 1).expect("in range"));
        let cycle: Vec<usize> = (0..n).collect();
        gens.push(Perm::from_cycles(n, &[&cycle]).expect("in range"));
    }
    from_generators(n, &gens)
}

pub fn alternating(n: usize) -> FiniteGroup {
    let gens: Vec<Perm> = (2..n)
        .map(|k| Perm::from_cycles(n, &[&[0, 1, k]]).expect("in range"))
        .collect();
    from_generators(n, &gens)
}

/// Symmetries of the regular `n`-gon, order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rotation = Perm::from_images((0..n).map(|i| (i + 1) % n).collect()).expect("rotation");
    let reflection = Perm::from_images((0..n).map(|i| (n - i) % n).collect()).expect("reflection");
    from_generators(n, &[rotation, reflection])
}

/// `{±1, ±i, ±j, ±k}` under quaternion multiplication, computed exactly over the integers.
pub fn quaternion_group() -> FiniteGroup {
    let names = ["1", "i", "j", "k"];
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for (b, name) in names.iter().enumerate() {
        for sign in [1i64, -1] {
            let mut q = HyperNumber::<i64>::basis(4, b).expect("dimension 4");
            if sign < 0 {
                q = -q;
            }
            elements.push(q);
            labels.push(if sign < 0 { format!("-{name}") } else { (*name).to_string() });
        }
    }
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| {
                    let ab = a.mul(b).expect("same dimension");
                    elements.iter().position(|c| *c == ab).expect("Q8 is closed")
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table(labels, &table, 0).expect("Q8 table is a group")
}
