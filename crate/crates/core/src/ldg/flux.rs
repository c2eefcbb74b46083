use crate::error::{LdgError, Result};
use crate::mesh::Mesh;
use crate::poly::ElementField;
use crate::problem::Problem;

/// Numerical flux values at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxRecord {
    pub u_hat: f64,
    pub p_hat: f64,
    pub q_hat: f64,
    pub p_tilde: f64,
    pub bu_tilde: f64,
}

/// Upwind splitting `((b + |b|)/2, (b - |b|)/2)`.
pub fn upwind_split(b: f64) -> (f64, f64) {
    (0.5 * (b + b.abs()), 0.5 * (b - b.abs()))
}

/// Fluxes at node `j` (0..=N) for the trial triple `(u, p, q)`.
///
/// Interior nodes take `U^-` for `U_hat`, `P^+` for `P_hat` and `P_tilde`,
/// `Q^+` for `Q_hat` and the upwind value for `bU`. At `x = 0` and `x = 1`
/// the boundary conditions fix `U_hat = 0` and `P_hat(1) = 0`.
pub fn flux_values<U, P, Q>(u: &U, p: &P, q: &Q, mesh: &Mesh, j: usize, problem: &Problem) -> Result<FluxRecord>
where
    U: ElementField + ?Sized,
    P: ElementField + ?Sized,
    Q: ElementField + ?Sized,
{
    let n = mesh.n_elements();
    if j > n {
        return Err(LdgError::InvalidArgument(format!("node {j} outside 0..={n}")));
    }
    let b = (problem.b)(mesh.node_coord(j));
    let (bp, bm) = upwind_split(b);
    let rec = if j == 0 {
        FluxRecord {
            u_hat: 0.0,
            p_hat: p.left_trace(0),
            q_hat: q.left_trace(0),
            p_tilde: p.left_trace(0),
            bu_tilde: bm * u.left_trace(0),
        }
    } else if j == n {
        FluxRecord {
            u_hat: 0.0,
            p_hat: 0.0,
            q_hat: q.right_trace(n - 1),
            p_tilde: p.right_trace(n - 1),
            bu_tilde: bp * u.right_trace(n - 1),
        }
    } else {
        FluxRecord {
            u_hat: u.right_trace(j - 1),
            p_hat: p.left_trace(j),
            q_hat: q.left_trace(j),
            p_tilde: p.left_trace(j),
            bu_tilde: bp * u.right_trace(j - 1) + bm * u.left_trace(j),
        }
    };
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Coord;
    use crate::poly::{ExactField, PiecewisePoly};
    use crate::problem::{constant, Problem};
    use std::sync::Arc;

    fn setup(b: f64) -> (Arc<Mesh>, Problem) {
        let mesh = Arc::new(Mesh::uniform(4).unwrap());
        let mut p = Problem::constant_coefficients(0.1, 1.0, 1.0, 1.0, constant(0.0));
        p.b = constant(b);
        (mesh, p)
    }

    /// Discontinuous field with distinct left/right traces at every node.
    fn sawtooth(mesh: &Arc<Mesh>) -> PiecewisePoly {
        let mut v = PiecewisePoly::zeros(mesh.clone(), 1);
        for e in 0..mesh.n_elements() {
            let c = v.element_coeffs_mut(e);
            c[0] = 1.0 + e as f64;
            c[1] = 0.5;
        }
        v
    }

    #[test]
    fn upwind_from_left_for_positive_b() {
        let (mesh, prob) = setup(1.0);
        let u = sawtooth(&mesh);
        let r = flux_values(&u, &u, &u, &mesh, 2, &prob).unwrap();
        assert_eq!(r.bu_tilde, u.right_trace(1));
        assert_eq!(r.u_hat, u.right_trace(1));
        assert_eq!(r.p_hat, u.left_trace(2));
        assert_eq!(r.q_hat, u.left_trace(2));
        assert_eq!(r.p_tilde, u.left_trace(2));
    }

    #[test]
    fn upwind_from_right_for_negative_b() {
        let (mesh, prob) = setup(-1.0);
        let u = sawtooth(&mesh);
        let r = flux_values(&u, &u, &u, &mesh, 2, &prob).unwrap();
        assert_eq!(r.bu_tilde, -u.left_trace(2));
    }

    #[test]
    fn boundary_fluxes() {
        let (mesh, prob) = setup(1.0);
        let f = |c: Coord| 3.0 + c.x;
        let ex = ExactField::new(&mesh, &f);
        let right = flux_values(&ex, &ex, &ex, &mesh, 4, &prob).unwrap();
        assert_eq!(right.u_hat, 0.0);
        assert_eq!(right.p_hat, 0.0);
        assert_eq!(right.q_hat, 4.0);
        assert_eq!(right.p_tilde, 4.0);
        assert_eq!(right.bu_tilde, 4.0);
        let left = flux_values(&ex, &ex, &ex, &mesh, 0, &prob).unwrap();
        assert_eq!(left.u_hat, 0.0);
        assert_eq!(left.p_hat, 3.0);
        assert_eq!(left.q_hat, 3.0);
        // b > 0 at x = 0: inflow part (b - |b|)/2 vanishes
        assert_eq!(left.bu_tilde, 0.0);
        assert!(flux_values(&ex, &ex, &ex, &mesh, 5, &prob).is_err());
    }
}
