//! Neighborhood prediction from the class partition of `X_ℓ`.

use super::ideal::{IdealClass, XEll};
use super::order::{standard_order, OrderKind};
use super::QuatError;
use crate::report::{Engine, Neighbor, NeighborhoodReport};

/// The prediction together with the data it was read from.
#[derive(Debug, Clone)]
pub struct Prediction {
    pub report: NeighborhoodReport,
    pub x_ell: XEll,
    pub classes: Vec<IdealClass>,
}

fn class_label(x: &XEll, c: &IdealClass) -> String {
    let names: Vec<String> = c
        .members
        .iter()
        .map(|&m| x.ideals[m].label.to_string())
        .collect();
    format!("[{}]", names.join(","))
}

/// Loops are the members of the principal class; every other class is one
/// neighbor whose multiplicity is the class size, defined over `F_p` when
/// the right order of a representative contains a square root of `−p`.
pub fn predicted_neighborhood(kind: OrderKind, p: u64, ell: u64) -> Result<Prediction, QuatError> {
    let order = standard_order(kind, p)?;
    let x = XEll::build(order, kind, ell)?;
    let classes = x.classes();
    let mut loops = 0;
    let mut neighbors = Vec::new();
    for c in &classes {
        if c.principal {
            loops += c.members.len();
            continue;
        }
        let rep = &x.ideals[c.members[0]].lattice;
        let ro = x.right_order(rep)?;
        neighbors.push(Neighbor {
            j: class_label(&x, c),
            multiplicity: c.members.len(),
            in_prime_field: ro.has_sqrt_minus_p(),
        });
    }
    let report = NeighborhoodReport::new(
        p,
        ell,
        kind.vertex_label().to_string(),
        loops,
        neighbors,
        Engine::Quaternion,
    );
    Ok(Prediction {
        report,
        x_ell: x,
        classes,
    })
}
