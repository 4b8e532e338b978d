//! Sparse polynomials in x, y and an optional family parameter t over a
//! cyclotomic field, plus 2x2 matrices and their substitution action.

use crate::cyclo::{CycField, CycNum, Rational};
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Exponent triple. Ordered graded-lexicographically with x > y > t, largest
/// first when iterating a polynomial for printing.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Monomial {
    pub ex: u32,
    pub ey: u32,
    pub et: u32,
}

impl Monomial {
    pub fn new(ex: u32, ey: u32, et: u32) -> Monomial {
        Monomial { ex, ey, et }
    }

    pub fn total_degree(&self) -> u32 {
        self.ex + self.ey + self.et
    }

    pub fn xy_degree(&self) -> u32 {
        self.ex + self.ey
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total_degree(), self.ex, self.ey).cmp(&(
            other.total_degree(),
            other.ex,
            other.ey,
        ))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Arc<CycField>,
    terms: BTreeMap<Monomial, CycNum>,
}

impl Poly {
    pub fn zero(field: &Arc<CycField>) -> Poly {
        Poly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CycNum) -> Poly {
        let mut p = Poly::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(Monomial::new(0, 0, 0), c);
        }
        p
    }

    pub fn var_x(field: &Arc<CycField>) -> Poly {
        Poly::monomial(CycNum::one(field), Monomial::new(1, 0, 0))
    }

    pub fn var_y(field: &Arc<CycField>) -> Poly {
        Poly::monomial(CycNum::one(field), Monomial::new(0, 1, 0))
    }

    pub fn var_t(field: &Arc<CycField>) -> Poly {
        Poly::monomial(CycNum::one(field), Monomial::new(0, 0, 1))
    }

    pub fn monomial(c: CycNum, m: Monomial) -> Poly {
        let mut p = Poly::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycNum)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> CycNum {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| CycNum::zero(&self.field))
    }

    /// Leading monomial in graded-lex order, None for zero.
    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next_back().copied()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// True when every term has the same x+y degree d and no t part.
    pub fn is_homogeneous_xy(&self, d: u32) -> bool {
        self.terms
            .keys()
            .all(|m| m.et == 0 && m.xy_degree() == d)
    }

    pub fn has_t(&self) -> bool {
        self.terms.keys().any(|m| m.et > 0)
    }

    fn insert_add(&mut self, m: Monomial, c: CycNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert_add(
                    Monomial::new(m1.ex + m2.ex, m1.ey + m2.ey, m1.et + m2.et),
                    c1 * c2,
                );
            }
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rational) -> Poly {
        self.scale(&CycNum::from_rational(&self.field, r.clone()))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(CycNum::one(&self.field));
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Exact substitution of x, y, t.
    pub fn evaluate(&self, x0: &CycNum, y0: &CycNum, t0: &CycNum) -> CycNum {
        let mut acc = CycNum::zero(&self.field);
        for (m, c) in &self.terms {
            let v = &(c * &x0.pow(m.ex as i64)) * &(&y0.pow(m.ey as i64) * &t0.pow(m.et as i64));
            acc = &acc + &v;
        }
        acc
    }

    /// Substitute only x and y, leaving t formal.
    pub fn evaluate_xy(&self, x0: &CycNum, y0: &CycNum) -> Poly {
        let mut out = Poly::zero(&self.field);
        for (m, c) in &self.terms {
            let v = &(c * &x0.pow(m.ex as i64)) * &y0.pow(m.ey as i64);
            out.insert_add(Monomial::new(0, 0, m.et), v);
        }
        out
    }

    /// Sum of terms with ex + ey = d.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.xy_degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Canonical text form, graded-lex descending: `x^5*y - x*y^5`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono = render_monomial(m);
            let (lead_sign, body) = render_coeff(c, mono.is_empty());
            if out.is_empty() {
                if lead_sign {
                    out.push('-');
                }
            } else {
                out.push_str(if lead_sign { " - " } else { " + " });
            }
            out.push_str(&body);
            if !body.is_empty() && !mono.is_empty() {
                out.push('*');
            }
            out.push_str(&mono);
        }
        out
    }
}

fn render_monomial(m: &Monomial) -> String {
    let mut s = String::new();
    for (v, e) in [("x", m.ex), ("y", m.ey), ("t", m.et)] {
        if e == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('*');
        }
        s.push_str(v);
        if e > 1 {
            s.push_str(&format!("^{}", e));
        }
    }
    s
}

/// Returns (leading minus sign, magnitude text). The magnitude text is empty
/// for a bare +-1 coefficient attached to a nonconstant monomial.
fn render_coeff(c: &CycNum, is_constant_term: bool) -> (bool, String) {
    if let Some(r) = c.as_rational() {
        use num_traits::Signed;
        let neg = r.is_negative();
        let mag = r.abs();
        use num_traits::One;
        if mag.is_one() && !is_constant_term {
            return (neg, String::new());
        }
        return (neg, crate::cyclo::format_rational(&mag));
    }
    // full cyclotomic coefficient: parenthesized, sign kept inside
    (false, format!("({})", c.render()))
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// 2x2 matrix over the session field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: CycNum,
    pub b: CycNum,
    pub c: CycNum,
    pub d: CycNum,
}

impl Mat2 {
    pub fn new(a: CycNum, b: CycNum, c: CycNum, d: CycNum) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity(field: &Arc<CycField>) -> Mat2 {
        Mat2::new(
            CycNum::one(field),
            CycNum::zero(field),
            CycNum::zero(field),
            CycNum::one(field),
        )
    }

    pub fn field(&self) -> &Arc<CycField> {
        self.a.field()
    }

    pub fn det(&self) -> CycNum {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> CycNum {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    pub fn inv(&self) -> Mat2 {
        let det = self.det();
        assert!(!det.is_zero(), "singular matrix");
        let di = det.inv();
        Mat2::new(
            &self.d * &di,
            &(-&self.b) * &di,
            &(-&self.c) * &di,
            &self.a * &di,
        )
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn apply_to_point(&self, x: &CycNum, y: &CycNum) -> (CycNum, CycNum) {
        // dual to the substitution action: v -> g^T v, so that
        // act(g, f)(v) = f(g^T v) holds.
        (
            &(&self.a * x) + &(&self.c * y),
            &(&self.b * x) + &(&self.d * y),
        )
    }

    pub fn render(&self) -> String {
        format!(
            "[[{}, {}], [{}, {}]]",
            self.a.render(),
            self.b.render(),
            self.c.render(),
            self.d.render()
        )
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Matrix fingerprint for hash-based dedup in group closure.
pub fn mat_hash(m: &Mat2) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    m.hash(&mut h);
    h.finish()
}

/// Linear substitution action: for g = [[a,b],[c,d]],
/// x -> a*x + c*y and y -> b*x + d*y (substitution by the transpose).
///
/// This is the convention under which diag(-1,1) sends x to -x and which
/// makes the action a left action: act(g*h, f) = act(g, act(h, f)).
/// The family parameter t never transforms.
pub fn act(g: &Mat2, f: &Poly) -> Poly {
    let field = f.field().clone();
    let nx = [g.a.clone(), g.c.clone()];
    let ny = [g.b.clone(), g.d.clone()];
    let mut out = Poly::zero(&field);
    // cache powers of the two images as polynomials
    let img_x = Poly::monomial(nx[0].clone(), Monomial::new(1, 0, 0))
        .add(&Poly::monomial(nx[1].clone(), Monomial::new(0, 1, 0)));
    let img_y = Poly::monomial(ny[0].clone(), Monomial::new(1, 0, 0))
        .add(&Poly::monomial(ny[1].clone(), Monomial::new(0, 1, 0)));
    let max_ex = f.terms.keys().map(|m| m.ex).max().unwrap_or(0);
    let max_ey = f.terms.keys().map(|m| m.ey).max().unwrap_or(0);
    let mut pow_x = Vec::with_capacity(max_ex as usize + 1);
    let mut pow_y = Vec::with_capacity(max_ey as usize + 1);
    pow_x.push(Poly::constant(CycNum::one(&field)));
    for e in 1..=max_ex {
        let prev = pow_x[(e - 1) as usize].clone();
        pow_x.push(prev.mul(&img_x));
    }
    pow_y.push(Poly::constant(CycNum::one(&field)));
    for e in 1..=max_ey {
        let prev = pow_y[(e - 1) as usize].clone();
        pow_y.push(prev.mul(&img_y));
    }
    for (m, c) in &f.terms {
        let term = pow_x[m.ex as usize].mul(&pow_y[m.ey as usize]).scale(c);
        // reattach the untouched t exponent
        for (tm, tc) in term.terms {
            out.insert_add(Monomial::new(tm.ex, tm.ey, m.et), tc);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rat_int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f24() -> Arc<CycField> {
        CycField::new(24)
    }

    fn xy(f: &Arc<CycField>) -> (Poly, Poly) {
        (Poly::var_x(f), Poly::var_y(f))
    }

    #[test]
    fn diag_minus_one_sends_x_to_minus_x() {
        let f = f24();
        let (x, y) = xy(&f);
        let g = Mat2::new(
            CycNum::from_int(&f, -1),
            CycNum::zero(&f),
            CycNum::zero(&f),
            CycNum::one(&f),
        );
        assert_eq!(act(&g, &x), x.neg());
        assert_eq!(act(&g, &y), y);
        assert_eq!(act(&g, &x.mul(&y)), x.mul(&y).neg());
    }

    #[test]
    fn tau_fixes_symmetric_quadric() {
        let f = f24();
        let (x, y) = xy(&f);
        let tau = Mat2::new(
            CycNum::zero(&f),
            CycNum::one(&f),
            CycNum::from_int(&f, -1),
            CycNum::zero(&f),
        );
        let q = x.mul(&x).add(&y.mul(&y));
        assert_eq!(act(&tau, &q), q);
    }

    #[test]
    fn evaluate_examples() {
        let f = f24();
        let (x, y) = xy(&f);
        let p = x.pow(2).mul(&y.pow(2));
        let one = CycNum::one(&f);
        assert!(p.evaluate(&one, &one, &one).is_one());
        // f2 of the tetrahedral case at (1, zeta_8) is -12
        let f2 = x
            .pow(8)
            .add(&x.pow(4).mul(&y.pow(4)).scale(&CycNum::from_int(&f, 14)))
            .add(&y.pow(8));
        let z8 = CycNum::root_of_unity(&f, 3);
        assert!(f2.evaluate(&one, &z8, &one).is_int(-12));
    }

    #[test]
    fn homogeneous_part_examples() {
        let f = f24();
        let (x, y) = xy(&f);
        let p = x.mul(&y).add(&x.pow(4));
        assert_eq!(p.homogeneous_part(2), x.mul(&y));
        assert_eq!(p.homogeneous_part(4), x.pow(4));
        assert!(p.homogeneous_part(3).is_zero());
        assert!(Poly::zero(&f).homogeneous_part(5).is_zero());
    }

    #[test]
    fn action_is_multiplicative_on_products() {
        let f = f24();
        let (x, y) = xy(&f);
        let g = Mat2::new(
            CycNum::root_of_unity(&f, 3),
            CycNum::one(&f),
            CycNum::from_int(&f, -1),
            CycNum::root_of_unity(&f, 7),
        );
        let p = x.pow(2).add(&y.scale(&CycNum::from_int(&f, 3)));
        let q = x.mul(&y).sub(&Poly::constant(CycNum::one(&f)));
        assert_eq!(act(&g, &p.mul(&q)), act(&g, &p).mul(&act(&g, &q)));
    }

    fn random_mat(f: &Arc<CycField>, rng: &mut ChaCha8Rng) -> Mat2 {
        loop {
            let e = |rng: &mut ChaCha8Rng| {
                CycNum::root_of_unity(f, rng.gen_range(0..24)).scale(&rat_int(rng.gen_range(-2..=2)))
            };
            let m = Mat2::new(e(rng), e(rng), e(rng), e(rng));
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    fn random_poly(f: &Arc<CycField>, rng: &mut ChaCha8Rng) -> Poly {
        let mut p = Poly::zero(f);
        for _ in 0..4 {
            let m = Monomial::new(rng.gen_range(0..4), rng.gen_range(0..4), 0);
            p = p.add(&Poly::monomial(
                CycNum::from_int(f, rng.gen_range(-5..=5)),
                m,
            ));
        }
        p
    }

    #[test]
    fn left_action_composition_200_samples() {
        let f = f24();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g = random_mat(&f, &mut rng);
            let h = random_mat(&f, &mut rng);
            let p = random_poly(&f, &mut rng);
            assert_eq!(act(&g.mul(&h), &p), act(&g, &act(&h, &p)));
        }
        let id = Mat2::identity(&f);
        let p = random_poly(&f, &mut rng);
        assert_eq!(act(&id, &p), p);
    }

    #[test]
    fn rendering_canonical() {
        let f = f24();
        let (x, y) = xy(&f);
        let p = x.pow(5).mul(&y).sub(&x.mul(&y.pow(5)));
        assert_eq!(p.render(), "x^5*y - x*y^5");
        let q = Poly::monomial(
            CycNum::root_of_unity(&f, 3).scale(&crate::cyclo::rat(1, 2)),
            Monomial::new(2, 1, 0),
        );
        assert_eq!(q.render(), "(1/2*z^3)*x^2*y");
    }
}
