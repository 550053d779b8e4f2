use super::{Precode, SchemeParams, SchemeTag, SecretSharingScheme};
use crate::error::{Error, Result};
use crate::galois::{base_independent, moore, Elem, Field, Matrix};
use crate::lrc::LinearCode;

/// Gabidulin precoding over GF(q^N) followed by the base code: the input
/// `a = (randomness || secret)` is replaced by its linearized-polynomial
/// evaluations at the first k+l power-basis points, and each base-field
/// coordinate column of those evaluations is encoded with the base code.
pub fn build_gabidulin_scheme(
    base: &LinearCode,
    k: usize,
    l: usize,
    n_ext: usize,
) -> Result<SecretSharingScheme> {
    gabidulin_scheme_tagged(SchemeTag::Gabidulin, base, k, l, n_ext)
}

pub fn gabidulin_scheme_tagged(
    tag: SchemeTag,
    base: &LinearCode,
    k: usize,
    l: usize,
    n_ext: usize,
) -> Result<SecretSharingScheme> {
    if base.field.degree() != 1 {
        return Err(Error::Parameter("base code must be over a prime field".into()));
    }
    if base.dim != k + l || k == 0 {
        return Err(Error::Parameter(format!(
            "base dimension {} must equal k + l = {} with k >= 1",
            base.dim,
            k + l
        )));
    }
    let n = base.n;
    if n_ext < n {
        return Err(Error::Parameter(format!(
            "extension degree N = {n_ext} must be at least n = {n}"
        )));
    }
    let loc = base
        .locality
        .as_ref()
        .ok_or_else(|| Error::Parameter("base code has no locality structure".into()))?;
    let ext = Field::new(base.field.p(), n_ext)?;
    let alphas: Vec<Elem> = ext.basis()[..k + l].to_vec();
    if !base_independent(&ext, &alphas) {
        return Err(Error::Construction(
            "evaluation points are linearly dependent".into(),
        ));
    }
    let d = base.min_distance()?;
    let m = n - d + 1;
    let params = SchemeParams {
        n,
        k,
        l,
        m,
        r: loc.r,
    };
    let scheme = SecretSharingScheme {
        tag,
        params,
        field: ext,
        secret_len: k,
        randomness_len: l,
        maps: (0..n).map(|i| base.g.select_rows(&[i])).collect(),
        precode: Precode::Gabidulin { alphas },
        recovery: loc.recovery.clone(),
        groups: loc.groups.clone(),
    };
    scheme.validate()?;
    Ok(scheme)
}

/// Constructive check that an eavesdropper on `e` learns nothing: the
/// eavesdropped rows span at most l dimensions and the Moore matrix of their
/// combined evaluation points over the first l Frobenius powers is full rank.
pub fn audit_gabidulin_security(scheme: &SecretSharingScheme, e: &[usize]) -> Result<bool> {
    let Precode::Gabidulin { alphas } = &scheme.precode else {
        return Err(Error::Parameter("scheme is not Gabidulin-precoded".into()));
    };
    if e.iter().any(|&i| i >= scheme.n()) {
        return Err(Error::Parameter("eavesdropped index out of range".into()));
    }
    let f = &scheme.field;
    let base = f.base_field();
    let l = scheme.randomness_len;
    // Greedy maximal independent subset E' of the eavesdropped rows.
    let mut basis = Matrix::empty(scheme.input_len());
    for &i in e {
        for r in 0..scheme.maps[i].rows() {
            let mut t = basis.clone();
            t.push_row(scheme.maps[i].row(r))?;
            if t.rank(&base) > basis.rows() {
                basis = t;
            }
        }
    }
    if basis.rows() > l {
        return Ok(false);
    }
    if basis.rows() == 0 {
        return Ok(true);
    }
    let tilde: Vec<Elem> = (0..basis.rows())
        .map(|r| {
            basis
                .row(r)
                .iter()
                .zip(alphas)
                .fold(Elem::ZERO, |acc, (&g, &a)| f.add(acc, f.mul(g, a)))
        })
        .collect();
    Ok(moore(f, &tilde, l).rank(f) == tilde.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Matrix;
    use crate::lrc::{build_partitioned_lrc, LocalityStructure};
    use crate::secret::{EncodingInput, ShareVector};
    use crate::subsets::combinations;

    pub(crate) fn pair_code() -> LinearCode {
        let f = Field::prime(2).unwrap();
        let g = Matrix::from_u64(&[vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]]).unwrap();
        LinearCode::new(f, g, Some(LocalityStructure::partition(4, 1).unwrap())).unwrap()
    }

    #[test]
    fn small_scheme_parameters_and_pairs() {
        let s = build_gabidulin_scheme(&pair_code(), 1, 1, 4).unwrap();
        assert_eq!(s.params, SchemeParams { n: 4, k: 1, l: 1, m: 3, r: 1 });
        assert_eq!(s.field.order(), 16);
        for sec in 0..16 {
            for rnd in 0..16 {
                let input = EncodingInput {
                    secret: vec![Elem(sec)],
                    randomness: vec![Elem(rnd)],
                };
                let c = s.encode(&input).unwrap();
                assert_eq!(c.get(0), c.get(1));
                assert_eq!(c.get(2), c.get(3));
                for subset in combinations(4, 3) {
                    assert_eq!(s.decode(&c.restrict(&subset)).unwrap(), vec![Elem(sec)]);
                }
            }
        }
    }

    #[test]
    fn extension_degree_must_cover_n() {
        assert!(build_gabidulin_scheme(&pair_code(), 1, 1, 3).is_err());
        assert!(build_gabidulin_scheme(&pair_code(), 2, 1, 4).is_err());
    }

    #[test]
    fn no_randomness_still_decodes() {
        let s = build_gabidulin_scheme(&pair_code(), 2, 0, 4).unwrap();
        let input = EncodingInput {
            secret: vec![Elem(7), Elem(12)],
            randomness: vec![],
        };
        let c = s.encode(&input).unwrap();
        let partial = c.restrict(&[1, 2, 3]);
        assert_eq!(s.decode(&partial).unwrap(), input.secret);
        assert!(audit_gabidulin_security(&s, &[]).unwrap());
    }

    #[test]
    fn singletons_secure_on_small_scheme() {
        let s = build_gabidulin_scheme(&pair_code(), 1, 1, 4).unwrap();
        assert!(audit_gabidulin_security(&s, &[]).unwrap());
        for i in 0..4 {
            assert!(audit_gabidulin_security(&s, &[i]).unwrap());
        }
        assert!(!audit_gabidulin_security(&s, &[0, 2]).unwrap());
        // Duplicated rows span one dimension only.
        assert!(audit_gabidulin_security(&s, &[0, 1]).unwrap());
    }

    #[test]
    fn flagship_parameters() {
        let f = Field::prime(11).unwrap();
        let code = build_partitioned_lrc(&f, 8, 6, 3).unwrap();
        let s = build_gabidulin_scheme(&code, 5, 1, 8).unwrap();
        assert_eq!(s.params, SchemeParams { n: 8, k: 5, l: 1, m: 7, r: 3 });
        let parity = ShareVector::full(vec![vec![Elem(1)]; 8]);
        // Parity coordinate 3 is the sum of 0, 1, 2.
        assert_eq!(s.repair(3, &parity).unwrap(), vec![Elem(3)]);
    }
}
