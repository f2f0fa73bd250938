use super::ProjectionFamily;
use crate::error::{Error, Result};
use crate::linalg::{image, kernel, map_preimage, Matrix};
use crate::rep::Representation;

/// Pseudo-inverse of `zeta` relative to the projection families at its
/// domain and codomain.
///
/// With `Q = 1 − π_{ker ζ}`, `ζ` restricts to an isomorphism from `im Q`
/// onto `im ζ`. The result inverts that isomorphism after projecting with
/// `π_{im ζ}`, so `ζ†ζ = Q` and `ζζ† = π_{im ζ}`.
pub fn pseudo_inverse(zeta: &Matrix, fam_dom: &ProjectionFamily, fam_cod: &ProjectionFamily) -> Result<Matrix> {
    let field = zeta.field();
    let (m, n) = zeta.shape();
    let missing = |object: &str, what: &str| Error::MissingFlagElement {
        object: object.to_string(),
        generator: String::new(),
        what: what.to_string(),
    };
    let pi_ker = fam_dom.projection(&kernel(zeta)).ok_or_else(|| missing(&fam_dom.object, "kernel"))?;
    let pi_im = fam_cod.projection(&image(zeta)).ok_or_else(|| missing(&fam_cod.object, "image"))?;

    let q = Matrix::identity(field, n).sub(pi_ker);
    let coimage = image(&q);
    let r = coimage.dim();
    // columns of U span im Q, columns of W = ζU span im ζ
    let u = coimage.basis().transpose();
    let w = zeta.mul(&u);
    // r independent rows of W give an invertible block and a left inverse
    let pivot_rows = w.transpose().echelon().pivots;
    if pivot_rows.len() != r {
        return Err(Error::AxiomViolation("generator is not injective on the complement of its kernel".into()));
    }
    let mut select = Matrix::zeros(field, r, m);
    for (i, &row) in pivot_rows.iter().enumerate() {
        select.set(i, row, field.one());
    }
    let block = select.mul(&w).inverse().expect("pivot rows form an invertible block");
    let left_inverse = block.mul(&select);
    Ok(u.mul(&left_inverse).mul(pi_im))
}

/// Pseudo-inverses of every generator, in declaration order.
pub fn pseudo_inverses(r: &Representation, fams: &[ProjectionFamily]) -> Result<Vec<Matrix>> {
    r.generators()
        .iter()
        .map(|g| {
            pseudo_inverse(&g.matrix, &fams[g.dom], &fams[g.cod]).map_err(|e| match e {
                Error::MissingFlagElement { object, what, .. } => {
                    Error::MissingFlagElement { object, generator: g.id.clone(), what }
                }
                other => other,
            })
        })
        .collect()
}

/// Whether `β⁻¹(im α) = ker β + im(β†α)` for maps with a common codomain.
pub fn kernel_decomposition_check(alpha: &Matrix, beta: &Matrix, beta_dagger: &Matrix) -> Result<bool> {
    if alpha.rows() != beta.rows() || beta_dagger.shape() != (beta.cols(), beta.rows()) {
        return Err(Error::AmbientMismatch(format!(
            "alpha {}x{}, beta {}x{}, beta-dagger {}x{}",
            alpha.rows(),
            alpha.cols(),
            beta.rows(),
            beta.cols(),
            beta_dagger.rows(),
            beta_dagger.cols()
        )));
    }
    let lhs = map_preimage(beta, &image(alpha))?;
    let rhs = kernel(beta).sum(&image(&beta_dagger.mul(alpha)))?;
    Ok(lhs == rhs)
}
