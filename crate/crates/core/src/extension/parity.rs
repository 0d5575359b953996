//! The derivative/parity table: differentiating an extension equals
//! extending the derivative with the parity flipped once per `y1` derivative.

use serde::{Deserialize, Serialize};

use super::{decompose_field, reflect, Parity};
use crate::spectral::multiplier::{derivative, second_derivative};
use crate::spectral::Field;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParityRelation {
    pub name: String,
    /// Max-norm discrepancy, maximized over the transverse axes involved.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParityReport {
    pub grid: Vec<usize>,
    pub relations: Vec<ParityRelation>,
}

impl ParityReport {
    pub fn max_residual(&self) -> f64 {
        self.relations
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
enum Op {
    D(usize),
    DD(usize, usize),
}

fn apply(op: Op, f: &Field) -> Field {
    match op {
        Op::D(a) => derivative(f, a),
        Op::DD(a, b) if a == b => second_derivative(f, a),
        Op::DD(a, b) => derivative(&derivative(f, a), b),
    }
}

fn flips(op: Op) -> bool {
    let y1 = |a: usize| usize::from(a == 0);
    match op {
        Op::D(a) => y1(a) % 2 == 1,
        Op::DD(a, b) => (y1(a) + y1(b)) % 2 == 1,
    }
}

fn flip(p: Parity) -> Parity {
    match p {
        Parity::Odd => Parity::Even,
        Parity::Even => Parity::Odd,
    }
}

/// Compares `op(part_extended)` with `(op part)_reflected` for the ten
/// entries of the table, on both the sine and the cosine part of `g`.
pub fn verify_parity_relations(g: &Field) -> ParityReport {
    let dim = g.spec().dim();
    let dn = decompose_field(g);
    let parts = [("D", Parity::Odd, dn.g_d()), ("N", Parity::Even, dn.g_n())];
    let transverse: Vec<usize> = (1..dim).collect();

    let mut families: Vec<(&str, Vec<Op>)> = vec![
        ("d_j", transverse.iter().map(|&j| Op::D(j)).collect()),
        (
            "d_j d_k",
            transverse
                .iter()
                .flat_map(|&j| {
                    transverse
                        .iter()
                        .filter(move |&&k| k >= j)
                        .map(move |&k| Op::DD(j, k))
                })
                .collect(),
        ),
        ("d_1", vec![Op::D(0)]),
        ("d_1 d_1", vec![Op::DD(0, 0)]),
        (
            "d_j d_1",
            transverse.iter().map(|&j| Op::DD(j, 0)).collect(),
        ),
    ];
    families.retain(|(_, ops)| !ops.is_empty());

    let mut relations = Vec::new();
    for (name, ops) in &families {
        for (tag, parity, part) in &parts {
            let extended = reflect(part, *parity);
            let residual = ops
                .iter()
                .map(|&op| {
                    let target = if flips(op) { flip(*parity) } else { *parity };
                    let lhs = apply(op, &extended);
                    let rhs = reflect(&apply(op, part), target);
                    lhs.max_abs_diff(&rhs)
                })
                .fold(0.0, f64::max);
            relations.push(ParityRelation {
                name: format!("{name} g_{tag}"),
                residual,
            });
        }
    }
    ParityReport {
        grid: g.spec().sizes().to_vec(),
        relations,
    }
}
