use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use super::{euclid_twist_word, Curve, Gen, Monomial, TorusElement, Twist};
use crate::coeff::{quantum_scale, LaurentPoly, RationalFunction};
use crate::error::{Error, Result};
use crate::freealg::{apply_operator_word, NCPolynomial, OperatorWord, Sign, TwistSystem, Word, DEFAULT_DEGREE_CAP};

fn scale_inv() -> &'static RationalFunction {
    static S: OnceLock<RationalFunction> = OnceLock::new();
    S.get_or_init(|| quantum_scale().inv().unwrap())
}

/// `t_a^e(b) = (A^e ab - A^-e ba) / (e (A^2 - A^-2))`.
pub fn twist_formula(alpha: &TorusElement, beta: &TorusElement, e: Sign) -> TorusElement {
    let k = e.as_i32();
    let lhs = alpha.mul(beta).scale(&RationalFunction::a_pow(k));
    let rhs = beta.mul(alpha).scale(&RationalFunction::a_pow(-k));
    let denom = &quantum_scale() * &RationalFunction::from_int(k as i64);
    lhs.sub(&rhs).scale(&denom.inv().unwrap())
}

/// Images of `x, y, z` under `t^e`.
fn images(t: Twist, e: Sign) -> &'static [TorusElement; 3] {
    static CACHE: OnceLock<[[TorusElement; 3]; 4]> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        let build = |t: Twist, e: Sign| {
            let alpha = match t {
                Twist::X => TorusElement::x(),
                Twist::Y => TorusElement::y(),
            };
            Gen::ALL.map(|g| {
                let beta = TorusElement::gen(g);
                if (t == Twist::X && g == Gen::X) || (t == Twist::Y && g == Gen::Y) {
                    beta
                } else {
                    twist_formula(&alpha, &beta, e)
                }
            })
        };
        [
            build(Twist::X, Sign::Plus),
            build(Twist::X, Sign::Minus),
            build(Twist::Y, Sign::Plus),
            build(Twist::Y, Sign::Minus),
        ]
    });
    let k = match (t, e) {
        (Twist::X, Sign::Plus) => 0,
        (Twist::X, Sign::Minus) => 1,
        (Twist::Y, Sign::Plus) => 2,
        (Twist::Y, Sign::Minus) => 3,
    };
    &all[k]
}

/// Evaluate `e` with `x, y, z` replaced by `img`, as a Horner scheme in
/// `x`, then `y`, then `z`, so every product has a small left factor.
fn substitute(e: &TorusElement, img: &[TorusElement; 3]) -> TorusElement {
    if e.is_zero() {
        return TorusElement::zero();
    }
    let max_c = e.terms().map(|(m, _)| m.c).max().unwrap_or(0);
    let mut zp = vec![TorusElement::one()];
    for k in 1..=max_c as usize {
        let next = img[2].mul(&zp[k - 1]);
        zp.push(next);
    }
    let mut q: BTreeMap<(u32, u32), TorusElement> = BTreeMap::new();
    for (m, c) in e.terms() {
        let slot = q.entry((m.a, m.b)).or_default();
        *slot = slot.add(&zp[m.c as usize].scale(c));
    }
    let max_a = q.keys().map(|k| k.0).max().unwrap_or(0);
    let max_b = q.keys().map(|k| k.1).max().unwrap_or(0);
    let mut out = TorusElement::zero();
    for a in (0..=max_a).rev() {
        let mut r = TorusElement::zero();
        for b in (0..=max_b).rev() {
            r = img[1].mul(&r);
            if let Some(v) = q.get(&(a, b)) {
                r = r.add(v);
            }
        }
        out = img[0].mul(&out).add(&r);
    }
    out
}

/// The automorphism `t^e` of the torus algebra, determined on generators
/// by the twist formula.
pub fn twist_auto(t: Twist, e: Sign, el: &TorusElement) -> TorusElement {
    substitute(el, images(t, e))
}

/// Apply an operator word through `twist_auto`, rightmost step first.
pub fn twist_word_auto(w: &OperatorWord, el: &TorusElement) -> Result<TorusElement> {
    let mut cur = el.clone();
    for &(j, e) in w.steps().iter().rev() {
        cur = twist_auto(Twist::from_index(j)?, e, &cur);
    }
    Ok(cur)
}

/// `z' = A xy - A^2 z`, the curve `(1,-1)`.
pub fn z_prime() -> TorusElement {
    TorusElement::monomial(Monomial::new(1, 1, 0), RationalFunction::a_pow(1))
        .sub(&TorusElement::z().scale(&RationalFunction::a_pow(2)))
}

/// The boundary curve `A xyz - A^2 z^2 - A^2 x^2 - A^-2 y^2 + A^2 + A^-2`.
pub fn boundary_element() -> &'static TorusElement {
    static D: OnceLock<TorusElement> = OnceLock::new();
    D.get_or_init(|| {
        let a = |k| RationalFunction::a_pow(k);
        let mut d = TorusElement::zero();
        d.add_term(Monomial::new(1, 1, 1), a(1));
        d.add_term(Monomial::new(0, 0, 2), -a(2));
        d.add_term(Monomial::new(2, 0, 0), -a(2));
        d.add_term(Monomial::new(0, 2, 0), -a(-2));
        d.add_term(Monomial::ONE, &a(2) + &a(-2));
        d
    })
}

fn curve_memo() -> &'static RwLock<HashMap<Curve, Arc<TorusElement>>> {
    static M: OnceLock<RwLock<HashMap<Curve, Arc<TorusElement>>>> = OnceLock::new();
    M.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The element of the curve `v`: `x` pushed along the Euclidean twist word.
pub fn curve_element(v: Curve) -> Arc<TorusElement> {
    curve_element_with(v, true)
}

pub fn curve_element_with(v: Curve, memo: bool) -> Arc<TorusElement> {
    if memo {
        if let Some(hit) = curve_memo().read().unwrap().get(&v) {
            return hit.clone();
        }
    }
    let w = euclid_twist_word(v);
    let el = Arc::new(twist_word_auto(&w, &TorusElement::x()).expect("twist indices are 1 or 2"));
    if memo {
        curve_memo().write().unwrap().insert(v, el.clone());
    }
    el
}

fn check_torus(system: &TwistSystem) -> Result<()> {
    if system.is_torus() {
        Ok(())
    } else {
        Err(Error::WrongSystem)
    }
}

/// `psi(X_1) = x/s`, `psi(X_2) = y/s` with `s = A^2 - A^-2`, extended to
/// an algebra homomorphism.
pub fn psi(p: &NCPolynomial) -> Result<TorusElement> {
    check_torus(p.system())?;
    let mut by_degree: BTreeMap<usize, Vec<(&[u16], &RationalFunction)>> = BTreeMap::new();
    for (w, c) in p.terms() {
        by_degree.entry(w.len()).or_default().push((w.raw(), c));
    }
    let mut out = TorusElement::zero();
    for (d, terms) in by_degree {
        let val = horner(&terms);
        let mut k = RationalFunction::one();
        for _ in 0..d {
            k = &k * scale_inv();
        }
        out = out.add(&val.scale(&k));
    }
    Ok(out)
}

/// `sum c_w w` for words of equal length, grouped by first letter.
fn horner(terms: &[(&[u16], &RationalFunction)]) -> TorusElement {
    if terms[0].0.is_empty() {
        let mut c = RationalFunction::zero();
        for (_, x) in terms {
            c = &c + *x;
        }
        return TorusElement::scalar(c);
    }
    let mut groups: BTreeMap<u16, Vec<(&[u16], &RationalFunction)>> = BTreeMap::new();
    for (w, c) in terms {
        groups.entry(w[0]).or_default().push((&w[1..], *c));
    }
    let mut out = TorusElement::zero();
    for (g, rest) in groups {
        let inner = horner(&rest);
        let g = if g == 1 { Gen::X } else { Gen::Y };
        out = out.add(&inner.lmul_gen(g));
    }
    out
}

/// `psi(w(p))` without expanding `w(p)`: because `psi` and every `T_j` are
/// algebra maps, `psi o T_w` is the homomorphism sending `X_k` to
/// `psi(T_w X_k)`, which is built up one step at a time.
pub fn psi_of_operator_image(w: &OperatorWord, p: &NCPolynomial) -> Result<TorusElement> {
    check_torus(p.system())?;
    w.check(p.system())?;
    let sys = p.system();
    // imgs[k] = psi(T_{s1} ... T_{si} X_{k+1}) for the prefix processed so far.
    let mut imgs = [psi(&NCPolynomial::generator(sys, 1)?)?, psi(&NCPolynomial::generator(sys, 2)?)?];
    for &(j, e) in w.steps() {
        let next = [1, 2].map(|k| {
            let step = crate::freealg::apply_twist(j, e, &NCPolynomial::generator(sys, k).unwrap()).unwrap();
            eval_with(&step, &imgs)
        });
        imgs = next;
    }
    Ok(eval_with(p, &imgs))
}

/// Evaluate a two-generator polynomial at `X_1 -> imgs[0]`, `X_2 -> imgs[1]`.
fn eval_with(p: &NCPolynomial, imgs: &[TorusElement; 2]) -> TorusElement {
    let mut out = TorusElement::zero();
    for (w, c) in p.terms() {
        let mut e = TorusElement::scalar(c.clone());
        for &l in w.raw().iter().rev() {
            e = imgs[l as usize - 1].mul(&e);
        }
        out = out.add(&e);
    }
    out
}

/// A polynomial `P` with `psi(P) = curve_element(v) / (A^2 - A^-2)`:
/// `X_2` for the longitude, otherwise the Euclidean word applied to `X_1`.
pub fn witness(v: Curve) -> Result<NCPolynomial> {
    witness_with_cap(v, DEFAULT_DEGREE_CAP)
}

pub fn witness_with_cap(v: Curve, cap: usize) -> Result<NCPolynomial> {
    let sys = torus_system();
    if v == Curve::LONGITUDE {
        return NCPolynomial::generator(&sys, 2);
    }
    let x1 = NCPolynomial::generator(&sys, 1)?;
    apply_operator_word(&euclid_twist_word(v), &x1, cap)
}

pub(crate) fn torus_system() -> Arc<TwistSystem> {
    static S: OnceLock<Arc<TwistSystem>> = OnceLock::new();
    S.get_or_init(|| Arc::new(TwistSystem::torus())).clone()
}

/// A polynomial `P` with `psi(P)` equal to the boundary element `d`, from
/// `z'z = A^2 x^2 + A^-2 y^2 + d - A^2 - A^-2`:
/// `P = s^2 W(1,-1) W(1,1) - A^2 s^2 X1^2 - A^-2 s^2 X2^2 + A^2 + A^-2`.
pub fn witness_boundary() -> Result<NCPolynomial> {
    let sys = torus_system();
    let s = quantum_scale();
    let s2 = &s * &s;
    let zp = witness(Curve::new(1, -1)?)?;
    let z = witness(Curve::new(1, 1)?)?;
    let x1 = NCPolynomial::generator(&sys, 1)?;
    let x2 = NCPolynomial::generator(&sys, 2)?;
    let a = |k| RationalFunction::a_pow(k);
    let mut p = zp.checked_mul(&z)?.scale(&s2);
    p = p.checked_sub(&x1.checked_mul(&x1)?.scale(&(&a(2) * &s2)))?;
    p = p.checked_sub(&x2.checked_mul(&x2)?.scale(&(&a(-2) * &s2)))?;
    p.add_term(Word::empty(), RationalFunction::from(LaurentPoly::a_pow(2) + LaurentPoly::a_pow(-2)));
    Ok(p)
}

/// `psi(w(p)) == t_w(psi(p))`, with `T_1 <-> t_x` and `T_2 <-> t_y`.
pub fn equivariance_check(w: &OperatorWord, p: &NCPolynomial, cap: usize) -> Result<bool> {
    check_torus(p.system())?;
    let lhs = psi(&apply_operator_word(w, p, cap)?)?;
    let rhs = twist_word_auto(w, &psi(p)?)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TorusElement {
        TorusElement::parse(s).unwrap()
    }

    fn nc(s: &str) -> NCPolynomial {
        NCPolynomial::parse(&torus_system(), s).unwrap()
    }

    #[test]
    fn twist_images() {
        assert_eq!(twist_auto(Twist::X, Sign::Plus, &t("y")), t("z"));
        assert_eq!(twist_auto(Twist::X, Sign::Plus, &t("x")), t("x"));
        assert_eq!(twist_auto(Twist::X, Sign::Plus, &t("z")), t("A^-1*x*z - A^-2*y"));
        assert_eq!(twist_auto(Twist::Y, Sign::Plus, &t("x")), z_prime());
        let back = twist_auto(Twist::X, Sign::Minus, &twist_auto(Twist::X, Sign::Plus, &t("y")));
        assert_eq!(back, t("y"));
    }

    #[test]
    fn resolution_identity() {
        // xy = A z + A^-1 z'
        assert_eq!(t("x*y"), t("A*z").add(&z_prime().scale(&RationalFunction::a_pow(-1))));
        assert_eq!(z_prime().mul(&t("z")), t("A*x*y*z - A^2*z^2"));
    }

    #[test]
    fn twists_preserve_relations() {
        let a = RationalFunction::a_pow(1);
        let ai = RationalFunction::a_pow(-1);
        let s = quantum_scale();
        let rel = |u: &TorusElement, v: &TorusElement, w: &TorusElement| {
            u.mul(v).scale(&a).sub(&v.mul(u).scale(&ai)).sub(&w.scale(&s))
        };
        for tw in [Twist::X, Twist::Y] {
            for e in [Sign::Plus, Sign::Minus] {
                let [x, y, z] = images(tw, e).clone();
                assert!(rel(&x, &y, &z).is_zero());
                assert!(rel(&y, &z, &x).is_zero());
                assert!(rel(&z, &x, &y).is_zero());
            }
        }
    }

    #[test]
    fn twist_inverse_on_low_degree() {
        for d in 0..=4 {
            for m in Monomial::all_of_degree(d) {
                let el = TorusElement::monomial(m, RationalFunction::one());
                for tw in [Twist::X, Twist::Y] {
                    for e in [Sign::Plus, Sign::Minus] {
                        let back = twist_auto(tw, e.flip(), &twist_auto(tw, e, &el));
                        assert_eq!(back, el);
                    }
                }
            }
        }
    }

    #[test]
    fn twist_is_multiplicative() {
        let p = t("x*y + A*z^2");
        let q = t("y*z - 2*x");
        for tw in [Twist::X, Twist::Y] {
            let f = |e: &TorusElement| twist_auto(tw, Sign::Plus, e);
            assert_eq!(f(&p.mul(&q)), f(&p).mul(&f(&q)));
        }
    }

    #[test]
    fn sep_identity_and_centrality() {
        let d = boundary_element();
        let lhs = z_prime()
            .mul(&t("z"))
            .sub(&t("A^2*x^2"))
            .sub(&t("A^-2*y^2"))
            .sub(d);
        // delta_0 = -A^2 - A^-2
        assert_eq!(lhs, t("-A^2 - A^-2"));
        for m in ["x", "y", "z", "x*y", "y^2*z", "x*z^2"] {
            assert!(d.commutator(&t(m)).is_zero(), "{m}");
        }
    }

    #[test]
    fn boundary_fixed_by_twists() {
        let d = boundary_element();
        for tw in [Twist::X, Twist::Y] {
            assert_eq!(&twist_auto(tw, Sign::Plus, d), d);
        }
    }

    #[test]
    fn base_curve_elements() {
        assert_eq!(*curve_element(Curve::MERIDIAN), t("x"));
        assert_eq!(*curve_element(Curve::LONGITUDE), t("y"));
        assert_eq!(*curve_element(Curve::new(1, 1).unwrap()), t("z"));
        assert_eq!(*curve_element(Curve::new(1, -1).unwrap()), z_prime());
        assert_eq!(*curve_element_with(Curve::new(2, 1).unwrap(), false), *curve_element(Curve::new(2, 1).unwrap()));
    }

    #[test]
    fn psi_examples() {
        let s_inv = scale_inv().clone();
        assert_eq!(psi(&nc("X1")).unwrap(), t("x").scale(&s_inv));
        assert_eq!(psi(&nc("A*X1*X2 - A^-1*X2*X1")).unwrap(), t("z").scale(&s_inv));
        assert_eq!(psi(&nc("3")).unwrap(), t("3"));
        let other = Arc::new(TwistSystem::chain(3).unwrap());
        assert_eq!(psi(&NCPolynomial::generator(&other, 1).unwrap()), Err(Error::WrongSystem));
    }

    #[test]
    fn psi_kills_relators() {
        for r in crate::freealg::torus_coxeter_relators(&torus_system()).unwrap() {
            assert!(psi(&r).unwrap().is_zero());
        }
    }

    #[test]
    fn psi_is_multiplicative() {
        let p = nc("X1*X2 - A*X2 + 2");
        let q = nc("X2*X1*X1 + A^-1*X1");
        assert_eq!(psi(&p.checked_mul(&q).unwrap()).unwrap(), psi(&p).unwrap().mul(&psi(&q).unwrap()));
    }

    #[test]
    fn substitution_route_matches_expansion() {
        for src in ["T1", "T2^-1 T1", "T1 T2 T1", "T2^-1 T1^-1 T2"] {
            let w = OperatorWord::parse(src).unwrap();
            for p in [nc("X1"), nc("X2"), nc("X1*X2")] {
                let direct = psi(&apply_operator_word(&w, &p, 64).unwrap()).unwrap();
                assert_eq!(psi_of_operator_image(&w, &p).unwrap(), direct, "{src}");
            }
        }
    }

    #[test]
    fn witnesses() {
        assert_eq!(witness(Curve::MERIDIAN).unwrap(), nc("X1"));
        assert_eq!(witness(Curve::LONGITUDE).unwrap(), nc("X2"));
        assert_eq!(witness(Curve::new(1, 1).unwrap()).unwrap(), nc("A*X1*X2 - A^-1*X2*X1"));
        let s_inv = scale_inv().clone();
        for (p, q) in [(2, 1), (1, -2), (3, 2), (3, -5)] {
            let v = Curve::new(p, q).unwrap();
            let w = witness(v).unwrap();
            assert_eq!(psi(&w).unwrap(), curve_element(v).scale(&s_inv), "{v}");
        }
        assert_eq!(witness(Curve::new(2, 1).unwrap()).unwrap().degree(), Some(3));
    }

    #[test]
    fn boundary_witness() {
        let w = witness_boundary().unwrap();
        assert_eq!(&psi(&w).unwrap(), boundary_element());
        let abel = w.abelianize();
        assert!(abel.keys().map(|k| k.iter().sum::<usize>()).max().unwrap() >= 3);
    }

    #[test]
    fn equivariance_examples() {
        assert!(equivariance_check(&OperatorWord::single(1, Sign::Plus), &nc("X2"), 16).unwrap());
        assert!(equivariance_check(&OperatorWord::empty(), &nc("X1*X2 + A"), 16).unwrap());
        let w = OperatorWord::new(vec![(2, Sign::Minus), (1, Sign::Plus)]);
        assert!(equivariance_check(&w, &nc("X1*X2"), 16).unwrap());
    }
}
