//! Per-group case ledger: generators, invariants, relations, branch data,
//! exceptional-curve modules, families, and expected results.
//!
//! The three exceptional cases are read from `data/cases.txt`; the dihedral
//! families are instantiated from their closed forms.

use crate::cyclo::{CycField, CycNum, Rational};
use crate::error::Error;
use crate::expr::{parse, parse_poly, parse_scalar, Env};
use crate::poly::{act, Mat2, Monomial, Poly};
use crate::reps::AffineTemplate;
use num_traits::One;
use std::sync::Arc;

static CASES_DATA: &str = include_str!("../data/cases.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseName {
    Gmm2,
    G2mm2,
    G12,
    G13,
    G22,
}

impl CaseName {
    pub fn parse(s: &str) -> Result<CaseName, Error> {
        match s {
            "gmm2" => Ok(CaseName::Gmm2),
            "g2mm2" => Ok(CaseName::G2mm2),
            "g12" => Ok(CaseName::G12),
            "g13" => Ok(CaseName::G13),
            "g22" => Ok(CaseName::G22),
            other => Err(Error::UnknownCase(other.to_string())),
        }
    }

    pub fn needs_m(&self) -> bool {
        matches!(self, CaseName::Gmm2 | CaseName::G2mm2)
    }
}

/// Expected counts transcribed per case; assertion targets only, never
/// inputs to the computations they check.
#[derive(Clone, Debug)]
pub struct Expected {
    pub order_g: usize,
    pub order_h: usize,
    pub classes_g: usize,
    pub classes_h: usize,
    pub reflection_classes: usize,
    pub n_exceptional: usize,
    pub quiver_h: AffineTemplate,
    pub center_g: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExpectedAction {
    Pointwise,
    Involution { fixed: Vec<String> },
    ExchangedWith(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveKind {
    Ordinary,
    Center,
}

/// One exceptional curve with its ambient module data and catalog points.
pub struct CurveSpec {
    pub label: String,
    pub dim: u32,
    pub kind: CurveKind,
    /// V_{h/2-d} generators (ordinary curves).
    pub minus: Vec<Poly>,
    /// V_{h/2+d} generators (ordinary curves).
    pub plus: Vec<Poly>,
    /// Explicit V_{h/2} generators for a center curve, when the catalog has
    /// them; otherwise the ambient is assembled from neighbor intersections.
    pub ambient_given: Option<Vec<Poly>>,
    /// Adjacent curve labels (center curves only).
    pub neighbors: Vec<String>,
    pub named_points: Vec<(String, Vec<Poly>)>,
    /// None means: construct the probe from an intertwiner between two
    /// distinguished points.
    pub probe: Option<Vec<Poly>>,
    pub expected: ExpectedAction,
    /// (point label, family label): isolated fixed points and the flat
    /// family resolving each.
    pub isolated: Vec<(String, String)>,
}

pub struct FamilySpec {
    pub label: String,
    pub dir: (CycNum, CycNum),
    pub gens: Vec<Poly>,
    pub limit_curve: String,
    pub limit_point: String,
}

/// A displayed action identity, checked at several formal-scalar samples.
pub struct IdentitySpec {
    pub label: String,
    pub element: String,
    pub lhs: String,
    pub rhs: String,
}

/// Parametrized curve for Moebius-map extraction. Generators are
/// expressions in the formal parameters a, b.
pub struct ParamSpec {
    pub curve: String,
    pub gens: Vec<String>,
    pub expect_scalar: bool,
    pub expect_matrix: Option<[String; 4]>,
    pub expect_fixed: Vec<(String, String)>,
}

pub struct GroupCase {
    pub name: CaseName,
    pub m: Option<u32>,
    pub label: String,
    pub field: Arc<CycField>,
    pub env: Env,
    pub gens_g: Vec<(String, Mat2)>,
    pub gens_h: Vec<(String, Mat2)>,
    pub alpha: Mat2,
    pub f: [Poly; 3],
    /// q(u, v) with f3^2 = q(f1, f2); u, v stored in the x, y slots.
    pub relation: Poly,
    /// p(u, v) = branch_unit * prod(branch_factors), where p = -q.
    pub branch_unit: Rational,
    pub branch_factors: Vec<Poly>,
    pub coxeter: u32,
    pub expected: Expected,
    pub curves: Vec<CurveSpec>,
    pub families: Vec<FamilySpec>,
    pub identities: Vec<IdentitySpec>,
    pub params: Vec<ParamSpec>,
    /// True for G(m,m,2): counts are verified but no module catalog exists.
    pub count_only: bool,
}

impl GroupCase {
    pub fn curve(&self, label: &str) -> Option<&CurveSpec> {
        self.curves.iter().find(|c| c.label == label)
    }

    pub fn gen_element(&self, name: &str) -> Option<&Mat2> {
        if name == "alpha" {
            return Some(&self.alpha);
        }
        self.gens_h
            .iter()
            .chain(self.gens_g.iter())
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }

    /// Substitute u -> f1, v -> f2 into a bivariate polynomial stored in the
    /// x, y slots.
    pub fn eval_uv(&self, rel: &Poly) -> Poly {
        let mut out = Poly::zero(&self.field);
        for (m, c) in rel.terms() {
            let term = self.f[0]
                .pow(m.ex)
                .mul(&self.f[1].pow(m.ey))
                .scale(c);
            out = out.add(&term);
        }
        out
    }

    /// f3^2 - q(f1, f2); identically zero when the relation holds.
    pub fn relation_defect(&self) -> Poly {
        self.f[2].pow(2).sub(&self.eval_uv(&self.relation))
    }

    /// Checks unit * prod(factors) = -q as bivariate polynomials and returns
    /// the component count r.
    pub fn verify_branch_factorization(&self) -> Result<usize, Error> {
        let mut prod = Poly::constant(CycNum::from_rational(&self.field, self.branch_unit.clone()));
        for f in &self.branch_factors {
            prod = prod.mul(f);
        }
        let p = self.relation.neg();
        if prod != p {
            return Err(Error::Validation(format!(
                "branch factor product {} does not equal p(u,v) = {}",
                prod.render(),
                p.render()
            )));
        }
        Ok(self.branch_factors.len())
    }

    /// alpha fixes f1 and f2 and negates f3; every H generator fixes all
    /// three. Also pins the substitution convention: diag(-1,1) must send
    /// x to -x. Fails loudly when any of this is violated.
    pub fn verify_alpha_action(&self) -> Result<(), Error> {
        let x = Poly::var_x(&self.field);
        let d = Mat2::new(
            CycNum::from_int(&self.field, -1),
            CycNum::zero(&self.field),
            CycNum::zero(&self.field),
            CycNum::one(&self.field),
        );
        if act(&d, &x) != x.neg() {
            return Err(Error::Validation(
                "action convention broken: diag(-1,1) does not send x to -x".into(),
            ));
        }
        for (name, h) in &self.gens_h {
            for (i, f) in self.f.iter().enumerate() {
                if &act(h, f) != f {
                    return Err(Error::Validation(format!(
                        "H generator {} does not fix f{}",
                        name,
                        i + 1
                    )));
                }
            }
        }
        if act(&self.alpha, &self.f[0]) != self.f[0]
            || act(&self.alpha, &self.f[1]) != self.f[1]
            || act(&self.alpha, &self.f[2]) != self.f[2].neg()
        {
            return Err(Error::Validation(
                "alpha does not act as (+, +, -) on (f1, f2, f3)".into(),
            ));
        }
        Ok(())
    }
}

/// Load a fully populated case.
pub fn get_case(name: CaseName, m: Option<u32>) -> Result<GroupCase, Error> {
    match name {
        CaseName::G12 | CaseName::G13 | CaseName::G22 => {
            let key = match name {
                CaseName::G12 => "g12",
                CaseName::G13 => "g13",
                CaseName::G22 => "g22",
                _ => unreachable!(),
            };
            parse_case_file(key)
        }
        CaseName::G2mm2 => {
            let m = m.ok_or(Error::BadParameter(0))?;
            if !(3..=12).contains(&m) {
                return Err(Error::BadParameter(m));
            }
            Ok(build_g2mm2(m))
        }
        CaseName::Gmm2 => {
            let m = m.ok_or(Error::BadParameter(0))?;
            if !(3..=12).contains(&m) {
                return Err(Error::BadParameter(m));
            }
            Ok(build_gmm2(m))
        }
    }
}

// --- data file parsing -------------------------------------------------------

fn parse_matrix(text: &str, env: &Env) -> Result<Mat2, Error> {
    let stripped: String = text
        .chars()
        .filter(|&c| c != '[' && c != ']')
        .collect();
    let parts: Vec<&str> = stripped.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!("matrix literal needs 4 entries: {}", text)));
    }
    let e: Vec<CycNum> = parts
        .iter()
        .map(|p| parse_scalar(p, env))
        .collect::<Result<_, _>>()?;
    Ok(Mat2::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone()))
}

fn parse_poly_list(text: &str, env: &Env) -> Result<Vec<Poly>, Error> {
    text.split(';').map(|p| parse_poly(p, env)).collect()
}

fn uv_env(field: &Arc<CycField>) -> Env {
    let mut env = Env::new(field);
    env.bind_poly("u", Poly::var_x(field));
    env.bind_poly("v", Poly::var_y(field));
    env
}

struct CaseBuilder {
    ints: std::collections::HashMap<String, i64>,
    quiver_h: Option<String>,
    env: Option<Env>,
    field: Option<Arc<CycField>>,
    gens_g: Vec<(String, Mat2)>,
    gens_h: Vec<(String, Mat2)>,
    alpha: Option<Mat2>,
    invariants: Vec<(String, Poly)>,
    relation: Option<Poly>,
    branch_unit: Rational,
    branch_factors: Vec<Poly>,
    curves: Vec<CurveSpec>,
    families: Vec<FamilySpec>,
    identities: Vec<IdentitySpec>,
    params: Vec<ParamSpec>,
}

impl CaseBuilder {
    fn new() -> CaseBuilder {
        CaseBuilder {
            ints: Default::default(),
            quiver_h: None,
            env: None,
            field: None,
            gens_g: Vec::new(),
            gens_h: Vec::new(),
            alpha: None,
            invariants: Vec::new(),
            relation: None,
            branch_unit: Rational::one(),
            branch_factors: Vec::new(),
            curves: Vec::new(),
            families: Vec::new(),
            identities: Vec::new(),
            params: Vec::new(),
        }
    }

    fn env(&mut self) -> Result<&mut Env, Error> {
        if self.env.is_none() {
            let n = *self
                .ints
                .get("conductor")
                .ok_or_else(|| Error::Parse("conductor must come first".into()))?;
            let field = CycField::new(n as u32);
            self.field = Some(field.clone());
            self.env = Some(Env::new(&field));
        }
        Ok(self.env.as_mut().unwrap())
    }

    fn int(&self, key: &str) -> Result<i64, Error> {
        self.ints
            .get(key)
            .copied()
            .ok_or_else(|| Error::Parse(format!("missing int key `{}`", key)))
    }

    fn curve_mut(&mut self, label: &str) -> Result<&mut CurveSpec, Error> {
        self.curves
            .iter_mut()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::Parse(format!("unknown curve `{}`", label)))
    }

    fn param_mut(&mut self, curve: &str) -> &mut ParamSpec {
        if !self.params.iter().any(|p| p.curve == curve) {
            self.params.push(ParamSpec {
                curve: curve.to_string(),
                gens: Vec::new(),
                expect_scalar: false,
                expect_matrix: None,
                expect_fixed: Vec::new(),
            });
        }
        self.params.iter_mut().find(|p| p.curve == curve).unwrap()
    }

    fn line(&mut self, line: &str) -> Result<(), Error> {
        let bad = |l: &str| Error::Parse(format!("bad catalog line: {}", l));
        if let Some(rest) = line.strip_prefix("int ") {
            let (k, v) = rest.split_once('=').ok_or_else(|| bad(line))?;
            self.ints.insert(
                k.trim().to_string(),
                v.trim().parse::<i64>().map_err(|_| bad(line))?,
            );
        } else if let Some(rest) = line.strip_prefix("quiver_h = ") {
            self.quiver_h = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("def ") {
            let (name, expr) = rest.split_once('=').ok_or_else(|| bad(line))?;
            let name = name.trim().to_string();
            let env = self.env()?;
            let v = parse(expr, env)?;
            env.bind(&name, v);
        } else if let Some(rest) = line.strip_prefix("gen ") {
            let (head, mat) = rest.split_once('=').ok_or_else(|| bad(line))?;
            let mut hw = head.split_whitespace();
            let which = hw.next().ok_or_else(|| bad(line))?.to_string();
            let name = hw.next().ok_or_else(|| bad(line))?.to_string();
            let env = self.env()?;
            let m = parse_matrix(mat, env)?;
            match which.as_str() {
                "g" => self.gens_g.push((name, m)),
                "h" => self.gens_h.push((name, m)),
                _ => return Err(bad(line)),
            }
        } else if let Some(rest) = line.strip_prefix("alpha = ") {
            let env = self.env()?;
            let rest = rest.to_string();
            self.alpha = Some(parse_matrix(&rest, env)?);
        } else if let Some(rest) = line.strip_prefix("invariant ") {
            let (name, expr) = rest.split_once('=').ok_or_else(|| bad(line))?;
            let name = name.trim().to_string();
            let env = self.env()?;
            let p = parse_poly(expr, env)?;
            env.bind_poly(&name, p.clone());
            self.invariants.push((name, p));
        } else if let Some(rest) = line.strip_prefix("relation = ") {
            let field = self.field.clone().ok_or_else(|| bad(line))?;
            self.relation = Some(parse_poly(rest, &uv_env(&field))?);
        } else if let Some(rest) = line.strip_prefix("branch unit = ") {
            self.branch_unit = crate::expr::parse_rational(rest)?;
        } else if let Some(rest) = line.strip_prefix("branch factor = ") {
            let field = self.field.clone().ok_or_else(|| bad(line))?;
            self.branch_factors.push(parse_poly(rest, &uv_env(&field))?);
        } else if let Some(rest) = line.strip_prefix("curve ") {
            let (label, attrs) = rest.split_once(':').ok_or_else(|| bad(line))?;
            let mut spec = CurveSpec {
                label: label.trim().to_string(),
                dim: 0,
                kind: CurveKind::Ordinary,
                minus: Vec::new(),
                plus: Vec::new(),
                ambient_given: None,
                neighbors: Vec::new(),
                named_points: Vec::new(),
                probe: None,
                expected: ExpectedAction::Pointwise,
                isolated: Vec::new(),
            };
            for attr in attrs.split_whitespace() {
                if let Some(v) = attr.strip_prefix("dim=") {
                    spec.dim = v.parse().map_err(|_| bad(line))?;
                } else if let Some(v) = attr.strip_prefix("kind=") {
                    spec.kind = match v {
                        "ordinary" => CurveKind::Ordinary,
                        "center" => CurveKind::Center,
                        _ => return Err(bad(line)),
                    };
                } else if let Some(v) = attr.strip_prefix("neighbors=") {
                    spec.neighbors = v.split(',').map(|s| s.to_string()).collect();
                } else if let Some(v) = attr.strip_prefix("expect=") {
                    spec.expected = if v == "pointwise" {
                        ExpectedAction::Pointwise
                    } else if let Some(w) = v.strip_prefix("involution:") {
                        ExpectedAction::Involution {
                            fixed: w.split(',').map(|s| s.to_string()).collect(),
                        }
                    } else if let Some(w) = v.strip_prefix("exchanged:") {
                        ExpectedAction::ExchangedWith(w.to_string())
                    } else {
                        return Err(bad(line));
                    };
                } else if attr == "probe=auto" {
                    // the default: probe stays None
                } else {
                    return Err(bad(line));
                }
            }
            self.curves.push(spec);
        } else if let Some(rest) = line.strip_prefix("module ") {
            let (head, gens) = rest.split_once('=').ok_or_else(|| bad(line))?;
            let mut hw = head.split_whitespace();
            let label = hw.next().ok_or_else(|| bad(line))?.to_string();
            let part = hw.next().ok_or_else(|| bad(line))?.to_string();
            let env = self.env()?.clone();
            let polys = parse_poly_list(gens, &env)?;
            let curve = self.curve_mut(&label)?;
            match part.as_str() {
                "minus" => curve.minus = polys,
                "plus" => curve.plus = polys,
                "ambient" => curve.ambient_given = Some(polys),
                _ => return Err(bad(line)),
            }
        } else if let Some(rest) = line.strip_prefix("probe ") {
            let (label, gens) = rest.split_once('=').ok_or_else(|| bad(line))?;
            let label = label.trim().to_string();
            let env = self.env()?.clone();
            let polys = parse_poly_list(gens, &env)?;
            self.curve_mut(&label)?.probe = Some(polys);
        } else if let Some(rest) = line.strip_prefix("point ") {
            let (head, gens) = rest.split_once('=').ok_or_else(|| bad(line))?;
            let mut hw = head.split_whitespace();
            let label = hw.next().ok_or_else(|| bad(line))?.to_string();
            let name = hw.next().ok_or_else(|| bad(line))?.to_string();
            let env = self.env()?.clone();
            let polys = parse_poly_list(gens, &env)?;
            self.curve_mut(&label)?.named_points.push((name, polys));
        } else if let Some(rest) = line.strip_prefix("isolated ") {
            let (head, fam) = rest.split_once("family =").ok_or_else(|| bad(line))?;
            let mut hw = head.split_whitespace();
            let label = hw.next().ok_or_else(|| bad(line))?.to_string();
            let point = hw.next().ok_or_else(|| bad(line))?.to_string();
            let fam = fam.trim().to_string();
            self.curve_mut(&label)?.isolated.push((point, fam));
        } else if let Some(rest) = line.strip_prefix("family ") {
            if let Some((label, body)) = rest.split_once(':') {
                let label = label.trim().to_string();
                let body = body.trim();
                let (dir_part, limit_part) =
                    body.split_once("limit =").ok_or_else(|| bad(line))?;
                let dir_text = dir_part
                    .trim()
                    .strip_prefix("dir =")
                    .ok_or_else(|| bad(line))?;
                let (c, d) = dir_text.split_once(',').ok_or_else(|| bad(line))?;
                let env = self.env()?.clone();
                let c = parse_scalar(c, &env)?;
                let d = parse_scalar(d, &env)?;
                let (curve, point) = limit_part.split_once('.').ok_or_else(|| bad(line))?;
                self.families.push(FamilySpec {
                    label,
                    dir: (c, d),
                    gens: Vec::new(),
                    limit_curve: curve.trim().to_string(),
                    limit_point: point.trim().to_string(),
                });
            } else if let Some((label, gens)) = rest.split_once("gens =") {
                let label = label.trim().to_string();
                let env = self.env()?.clone();
                let polys = parse_poly_list(gens, &env)?;
                let fam = self
                    .families
                    .iter_mut()
                    .find(|f| f.label == label)
                    .ok_or_else(|| bad(line))?;
                fam.gens = polys;
            } else {
                return Err(bad(line));
            }
        } else if let Some(rest) = line.strip_prefix("identity ") {
            let (head, body) = rest.split_once(':').ok_or_else(|| bad(line))?;
            let mut hw = head.split_whitespace();
            let label = hw.next().ok_or_else(|| bad(line))?.to_string();
            let element = hw.next().ok_or_else(|| bad(line))?.to_string();
            let (lhs, rhs) = body.split_once("=>").ok_or_else(|| bad(line))?;
            self.identities.push(IdentitySpec {
                label,
                element,
                lhs: lhs.trim().to_string(),
                rhs: rhs.trim().to_string(),
            });
        } else if let Some(rest) = line.strip_prefix("param ") {
            let (label, gens) = rest.split_once('=').ok_or_else(|| bad(line))?;
            let label = label.trim().to_string();
            let gens: Vec<String> = gens.split(';').map(|s| s.trim().to_string()).collect();
            self.param_mut(&label).gens = gens;
        } else if let Some(rest) = line.strip_prefix("mobius ") {
            let mut hw = rest.splitn(2, char::is_whitespace);
            let label = hw.next().ok_or_else(|| bad(line))?.to_string();
            let body = hw.next().unwrap_or("").trim();
            if body == "scalar" {
                self.param_mut(&label).expect_scalar = true;
            } else if let Some(mat) = body.strip_prefix("matrix =") {
                let stripped: String =
                    mat.chars().filter(|&c| c != '[' && c != ']').collect();
                let parts: Vec<String> =
                    stripped.split(',').map(|s| s.trim().to_string()).collect();
                if parts.len() != 4 {
                    return Err(bad(line));
                }
                self.param_mut(&label).expect_matrix =
                    Some([parts[0].clone(), parts[1].clone(), parts[2].clone(), parts[3].clone()]);
            } else if let Some(fx) = body.strip_prefix("fixed =") {
                let mut pts = Vec::new();
                for pair in fx.split(';') {
                    let (a, b) = pair.split_once(',').ok_or_else(|| bad(line))?;
                    pts.push((a.trim().to_string(), b.trim().to_string()));
                }
                self.param_mut(&label).expect_fixed = pts;
            } else {
                return Err(bad(line));
            }
        } else {
            return Err(bad(line));
        }
        Ok(())
    }

    fn finish(mut self, name: CaseName, label: &str) -> Result<GroupCase, Error> {
        let field = self
            .field
            .clone()
            .ok_or_else(|| Error::Parse("no conductor".into()))?;
        let quiver_h = match self.quiver_h.as_deref() {
            Some("E6") => AffineTemplate::E6,
            Some("E7") => AffineTemplate::E7,
            Some("E8") => AffineTemplate::E8,
            other => {
                return Err(Error::Parse(format!("bad quiver template {:?}", other)));
            }
        };
        let expected = Expected {
            order_g: self.int("order_g")? as usize,
            order_h: self.int("order_h")? as usize,
            classes_g: self.int("classes_g")? as usize,
            classes_h: self.int("classes_h")? as usize,
            reflection_classes: self.int("reflection_classes")? as usize,
            n_exceptional: self.int("expected_n")? as usize,
            quiver_h,
            center_g: self.ints.get("center_g").map(|&v| v as usize),
        };
        if self.invariants.len() != 3 {
            return Err(Error::Parse("need exactly three invariants".into()));
        }
        let coxeter = self.int("coxeter")? as u32;
        let f3 = self.invariants.pop().unwrap().1;
        let f2 = self.invariants.pop().unwrap().1;
        let f1 = self.invariants.pop().unwrap().1;
        Ok(GroupCase {
            name,
            m: None,
            label: label.to_string(),
            field,
            env: self.env.take().unwrap(),
            gens_g: self.gens_g,
            gens_h: self.gens_h,
            alpha: self.alpha.ok_or_else(|| Error::Parse("no alpha".into()))?,
            f: [f1, f2, f3],
            relation: self
                .relation
                .ok_or_else(|| Error::Parse("no relation".into()))?,
            branch_unit: self.branch_unit,
            branch_factors: self.branch_factors,
            coxeter,
            expected,
            curves: self.curves,
            families: self.families,
            identities: self.identities,
            params: self.params,
            count_only: false,
        })
    }
}

fn parse_case_file(key: &str) -> Result<GroupCase, Error> {
    let header = format!("[case {}]", key);
    let mut builder = CaseBuilder::new();
    let mut inside = false;
    for raw in CASES_DATA.lines() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("[case ") {
            inside = line == header;
            continue;
        }
        if inside {
            builder.line(line)?;
        }
    }
    builder.finish(CaseName::parse(key)?, key)
}

// --- dihedral families (closed forms) -----------------------------------------

fn mono(field: &Arc<CycField>, c: i64, ex: u32, ey: u32) -> Poly {
    Poly::monomial(CycNum::from_int(field, c), Monomial::new(ex, ey, 0))
}

/// G(2m,m,2): binary dihedral intersection, D_{m+2} singularity.
pub fn build_g2mm2(m: u32) -> GroupCase {
    let n_cond = num_integer::lcm(2 * m, 4);
    let field = CycField::new(n_cond);
    let z = |k: i64| CycNum::root_of_unity(&field, k);
    let zero = CycNum::zero(&field);
    let one = CycNum::one(&field);
    let eps = z((n_cond / (2 * m)) as i64);
    let iunit = z((n_cond / 4) as i64);

    let r1 = Mat2::new(zero.clone(), one.clone(), one.clone(), zero.clone());
    let tm = Mat2::new(CycNum::from_int(&field, -1), zero.clone(), zero.clone(), one.clone());
    let s = Mat2::new(zero.clone(), eps.inv(), eps.clone(), zero.clone());
    let sigma = Mat2::new(eps.clone(), zero.clone(), zero.clone(), eps.inv());
    let tau = Mat2::new(zero.clone(), one.clone(), CycNum::from_int(&field, -1), zero.clone());

    let f1 = mono(&field, 1, 2 * m, 0).add(&mono(&field, 1, 0, 2 * m));
    let f2 = mono(&field, 1, 2, 2);
    let f3 = mono(&field, 1, 1, 1).mul(&mono(&field, 1, 2 * m, 0).sub(&mono(&field, 1, 0, 2 * m)));

    // q(u,v) = v (u^2 - 4 v^m)
    let u = Poly::var_x(&field);
    let v = Poly::var_y(&field);
    let relation = v.mul(&u.pow(2).sub(&v.pow(m).scale(&CycNum::from_int(&field, 4))));
    let branch_factors = if m % 2 == 1 {
        vec![
            v.clone(),
            u.pow(2).sub(&v.pow(m).scale(&CycNum::from_int(&field, 4))),
        ]
    } else {
        vec![
            v.clone(),
            u.sub(&v.pow(m / 2).scale(&CycNum::from_int(&field, 2))),
            u.add(&v.pow(m / 2).scale(&CycNum::from_int(&field, 2))),
        ]
    };

    let even = m % 2 == 0;
    let expected = Expected {
        order_g: 8 * m as usize,
        order_h: 4 * m as usize,
        classes_g: if even { 2 * m as usize + 6 } else { 2 * m as usize + 3 },
        classes_h: m as usize + 3,
        reflection_classes: if even { 3 } else { 2 },
        n_exceptional: if even { 2 * m as usize + 2 } else { 2 * m as usize },
        quiver_h: AffineTemplate::D(m as usize + 2),
        center_g: None,
    };

    // curve catalog from the closed forms
    let mut curves = Vec::new();
    let xy = mono(&field, 1, 1, 1);

    // endpoint rho1': V_2 = (xy), V_2m = (x^2m - y^2m)
    let v2m = mono(&field, 1, 2 * m, 0).sub(&mono(&field, 1, 0, 2 * m));
    curves.push(CurveSpec {
        label: "rho1p".into(),
        dim: 1,
        kind: CurveKind::Ordinary,
        minus: vec![xy.clone()],
        plus: vec![v2m.clone()],
        ambient_given: None,
        neighbors: vec![],
        named_points: vec![],
        probe: Some(vec![xy.add(&v2m)]),
        expected: ExpectedAction::Involution {
            fixed: vec!["minus".into(), "plus".into()],
        },
        isolated: vec![("minus".into(), "famV".into())],
    });

    // middle curves rho_k, 2 <= k <= m-1
    for k in 2..m {
        let minus = vec![mono(&field, 1, k, 1), mono(&field, 1, 1, k)];
        let plus = vec![
            mono(&field, 1, 2 * m - k + 1, 0),
            mono(&field, 1, 0, 2 * m - k + 1),
        ];
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let probe = vec![
            mono(&field, 1, k, 1).add(&mono(&field, 1, 0, 2 * m - k + 1)),
            mono(&field, 1, 1, k).add(&mono(&field, sign, 2 * m - k + 1, 0)),
        ];
        curves.push(CurveSpec {
            label: format!("rho{}", k),
            dim: 2,
            kind: CurveKind::Ordinary,
            minus,
            plus,
            ambient_given: None,
            neighbors: vec![],
            named_points: vec![],
            probe: Some(probe),
            expected: if k % 2 == 0 {
                ExpectedAction::Pointwise
            } else {
                ExpectedAction::Involution {
                    fixed: vec!["minus".into(), "plus".into()],
                }
            },
            isolated: vec![],
        });
    }

    // center rho_m: V_{m+1} = (x^{m+1}, y^{m+1}) + (x^m y, x y^m)
    let vprime = vec![mono(&field, 1, m + 1, 0), mono(&field, 1, 0, m + 1)];
    let vsecond = vec![mono(&field, 1, m, 1), mono(&field, 1, 1, m)];
    let probe_sign = if m % 2 == 0 { 1 } else { -1 };
    let center_probe = vec![
        mono(&field, 1, m + 1, 0).add(&mono(&field, 1, 1, m)),
        mono(&field, 1, 0, m + 1).add(&mono(&field, probe_sign, m, 1)),
    ];
    let nb_prev = format!("rho{}", m - 1);
    curves.push(CurveSpec {
        label: format!("rho{}", m),
        dim: 2,
        kind: CurveKind::Center,
        minus: vec![],
        plus: vec![],
        ambient_given: Some(vprime.iter().chain(vsecond.iter()).cloned().collect()),
        neighbors: vec![
            nb_prev.clone(),
            format!("rho{}p", m + 1),
            format!("rho{}p", m + 2),
        ],
        named_points: vec![("vprime".into(), vprime)],
        probe: Some(center_probe),
        expected: if even {
            ExpectedAction::Pointwise
        } else {
            ExpectedAction::Involution {
                fixed: vec![format!("isect_{}", nb_prev), "vprime".into()],
            }
        },
        isolated: if even {
            vec![]
        } else {
            vec![("vprime".into(), "famD".into())]
        },
    });

    // endpoints rho_{m+1}', rho_{m+2}': g_- = x^m - i^{m+2} y^m, g_+ with +
    let im2 = iunit.pow((m + 2) as i64);
    let gminus = mono(&field, 1, m, 0).sub(&Poly::monomial(im2.clone(), Monomial::new(0, m, 0)));
    let gplus = mono(&field, 1, m, 0).add(&Poly::monomial(im2.clone(), Monomial::new(0, m, 0)));
    // which family limit lands on which primed curve depends on i^{m+2}
    let minus_has_real_diff = im2.is_one(); // i^{m+2} = 1 iff m = 2 mod 4
    for (label, gmod, gother, partner) in [
        (
            format!("rho{}p", m + 1),
            gminus.clone(),
            gplus.clone(),
            format!("rho{}p", m + 2),
        ),
        (
            format!("rho{}p", m + 2),
            gplus.clone(),
            gminus.clone(),
            format!("rho{}p", m + 1),
        ),
    ] {
        let is_first = label == format!("rho{}p", m + 1);
        let fam = if even {
            // x^m - y^m comes from direction (1,1); x^m + y^m from (1, eps)
            let has_minus_form = if is_first { minus_has_real_diff } else { !minus_has_real_diff };
            if has_minus_form { "famMinus" } else { "famPlus" }
        } else {
            ""
        };
        curves.push(CurveSpec {
            label: label.clone(),
            dim: 1,
            kind: CurveKind::Ordinary,
            minus: vec![gmod.clone()],
            plus: vec![xy.mul(&gother)],
            ambient_given: None,
            neighbors: vec![],
            named_points: vec![],
            probe: Some(vec![gmod.add(&xy.mul(&gother))]),
            expected: if even {
                ExpectedAction::Involution {
                    fixed: vec!["minus".into(), "plus".into()],
                }
            } else {
                ExpectedAction::ExchangedWith(partner)
            },
            isolated: if even {
                vec![("minus".into(), fam.into())]
            } else {
                vec![]
            },
        });
    }

    let mut families = vec![FamilySpec {
        label: "famV".into(),
        dir: (one.clone(), zero.clone()),
        gens: vec![xy.clone()],
        limit_curve: "rho1p".into(),
        limit_point: "minus".into(),
    }];
    if even {
        let (minus_curve, plus_curve) = if minus_has_real_diff {
            (format!("rho{}p", m + 1), format!("rho{}p", m + 2))
        } else {
            (format!("rho{}p", m + 2), format!("rho{}p", m + 1))
        };
        families.push(FamilySpec {
            label: "famMinus".into(),
            dir: (one.clone(), one.clone()),
            gens: vec![mono(&field, 1, m, 0).sub(&mono(&field, 1, 0, m))],
            limit_curve: minus_curve,
            limit_point: "minus".into(),
        });
        families.push(FamilySpec {
            label: "famPlus".into(),
            dir: (one.clone(), eps.clone()),
            gens: vec![mono(&field, 1, m, 0).add(&mono(&field, 1, 0, m))],
            limit_curve: plus_curve,
            limit_point: "minus".into(),
        });
    } else {
        families.push(FamilySpec {
            label: "famD".into(),
            dir: (one.clone(), one.clone()),
            gens: vec![mono(&field, 1, m + 1, 0), mono(&field, 1, 0, m + 1)],
            limit_curve: format!("rho{}", m),
            limit_point: "vprime".into(),
        });
    }

    GroupCase {
        name: CaseName::G2mm2,
        m: Some(m),
        label: format!("g2mm2(m={})", m),
        env: Env::new(&field),
        gens_g: vec![("r1".into(), r1), ("tm".into(), tm.clone()), ("s".into(), s)],
        gens_h: vec![("sigma".into(), sigma), ("tau".into(), tau)],
        alpha: tm,
        f: [f1, f2, f3],
        relation,
        branch_unit: -Rational::one(),
        branch_factors,
        coxeter: 2 * m + 2,
        expected,
        curves,
        families,
        identities: Vec::new(),
        params: Vec::new(),
        count_only: false,
        field,
    }
}

/// G(m,m,2): dihedral of order 2m; counts only (no module catalog).
pub fn build_gmm2(m: u32) -> GroupCase {
    let n_cond = num_integer::lcm(m, 4);
    let field = CycField::new(n_cond);
    let zero = CycNum::zero(&field);
    let one = CycNum::one(&field);
    let eps = CycNum::root_of_unity(&field, (n_cond / m) as i64);

    let r1 = Mat2::new(zero.clone(), one.clone(), one.clone(), zero.clone());
    let s = Mat2::new(zero.clone(), eps.inv(), eps.clone(), zero.clone());
    let sigma = Mat2::new(eps.clone(), zero.clone(), zero.clone(), eps.inv());

    let f1 = mono(&field, 1, 1, 1);
    let f2 = mono(&field, 1, m, 0).add(&mono(&field, 1, 0, m));
    let f3 = mono(&field, 1, m, 0).sub(&mono(&field, 1, 0, m));
    // q(u,v) = v^2 - 4 u^m, p = 4 u^m - v^2
    let u = Poly::var_x(&field);
    let v = Poly::var_y(&field);
    let relation = v.pow(2).sub(&u.pow(m).scale(&CycNum::from_int(&field, 4)));
    let even = m % 2 == 0;
    let branch_factors = if even {
        vec![
            u.pow(m / 2).scale(&CycNum::from_int(&field, 2)).sub(&v),
            u.pow(m / 2).scale(&CycNum::from_int(&field, 2)).add(&v),
        ]
    } else {
        vec![u.pow(m).scale(&CycNum::from_int(&field, 4)).sub(&v.pow(2))]
    };
    let expected = Expected {
        order_g: 2 * m as usize,
        order_h: m as usize,
        classes_g: if even { m as usize / 2 + 3 } else { (m as usize + 3) / 2 },
        classes_h: m as usize,
        reflection_classes: if even { 2 } else { 1 },
        n_exceptional: if even { m as usize / 2 } else { (m as usize - 1) / 2 },
        quiver_h: AffineTemplate::A(m as usize),
        center_g: None,
    };
    GroupCase {
        name: CaseName::Gmm2,
        m: Some(m),
        label: format!("gmm2(m={})", m),
        env: Env::new(&field),
        gens_g: vec![("r1".into(), r1.clone()), ("s".into(), s)],
        gens_h: vec![("sigma".into(), sigma)],
        alpha: r1,
        f: [f1, f2, f3],
        relation,
        branch_unit: Rational::one(),
        branch_factors,
        coxeter: m,
        expected,
        curves: Vec::new(),
        families: Vec::new(),
        identities: Vec::new(),
        params: Vec::new(),
        count_only: true,
        field,
    }
}

/// Render a case as JSON (the `case-data` CLI command).
pub fn case_json(case: &GroupCase) -> serde_json::Value {
    let polys = |v: &Vec<Poly>| -> Vec<String> { v.iter().map(|p| p.render()).collect() };
    serde_json::json!({
        "label": case.label,
        "conductor": case.field.conductor(),
        "coxeter": case.coxeter,
        "count_only": case.count_only,
        "generators_g": case.gens_g.iter().map(|(n, m)| serde_json::json!({"name": n, "matrix": m.render()})).collect::<Vec<_>>(),
        "generators_h": case.gens_h.iter().map(|(n, m)| serde_json::json!({"name": n, "matrix": m.render()})).collect::<Vec<_>>(),
        "alpha": case.alpha.render(),
        "invariants": {
            "f1": case.f[0].render(),
            "f2": case.f[1].render(),
            "f3": case.f[2].render(),
        },
        "relation_q": case.relation.render(),
        "branch": {
            "unit": crate::cyclo::format_rational(&case.branch_unit),
            "factors": polys(&case.branch_factors),
        },
        "expected": {
            "order_g": case.expected.order_g,
            "order_h": case.expected.order_h,
            "classes_g": case.expected.classes_g,
            "classes_h": case.expected.classes_h,
            "reflection_classes": case.expected.reflection_classes,
            "n_exceptional": case.expected.n_exceptional,
        },
        "curves": case.curves.iter().map(|c| serde_json::json!({
            "label": c.label,
            "dim": c.dim,
            "kind": format!("{:?}", c.kind),
            "minus": polys(&c.minus),
            "plus": polys(&c.plus),
            "ambient": c.ambient_given.as_ref().map(polys),
            "neighbors": c.neighbors,
            "points": c.named_points.iter().map(|(n, g)| serde_json::json!({"name": n, "gens": polys(g)})).collect::<Vec<_>>(),
            "probe": c.probe.as_ref().map(polys),
            "expected": match &c.expected {
                ExpectedAction::Pointwise => "pointwise-fixed".to_string(),
                ExpectedAction::Involution { fixed } => format!("involution (fixed: {})", fixed.join(", ")),
                ExpectedAction::ExchangedWith(p) => format!("exchanged-with {}", p),
            },
        })).collect::<Vec<_>>(),
        "families": case.families.iter().map(|f| serde_json::json!({
            "label": f.label,
            "direction": [f.dir.0.render(), f.dir.1.render()],
            "gens": polys(&f.gens),
            "limit": format!("{}.{}", f.limit_curve, f.limit_point),
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_exceptional_cases() {
        for key in [CaseName::G12, CaseName::G13, CaseName::G22] {
            let case = get_case(key, None).unwrap();
            assert_eq!(case.curves.len() + 1, case.expected.classes_h);
            case.verify_alpha_action().unwrap();
            assert!(case.relation_defect().is_zero());
            case.verify_branch_factorization().unwrap();
        }
    }

    #[test]
    fn relation_examples() {
        // f3^2 = f2^3 - 108 f1^4 for the E6 case and friends are covered by
        // relation_defect above; check the stated q shapes directly.
        let g12 = get_case(CaseName::G12, None).unwrap();
        let uvenv = uv_env(&g12.field);
        assert_eq!(
            g12.relation,
            parse_poly("v^3 - 108*u^4", &uvenv).unwrap()
        );
        let g2 = get_case(CaseName::G2mm2, Some(5)).unwrap();
        let uvenv = uv_env(&g2.field);
        assert_eq!(g2.relation, parse_poly("v*(u^2 - 4*v^5)", &uvenv).unwrap());
        assert!(g2.relation_defect().is_zero());
        assert_eq!(g2.verify_branch_factorization().unwrap(), 2);
        let g4 = get_case(CaseName::G2mm2, Some(4)).unwrap();
        assert!(g4.relation_defect().is_zero());
        assert_eq!(g4.verify_branch_factorization().unwrap(), 3);
        g4.verify_alpha_action().unwrap();
        let g22 = get_case(CaseName::G22, None).unwrap();
        let uvenv = uv_env(&g22.field);
        assert_eq!(
            g22.relation,
            parse_poly("1728*u^5 + v^3", &uvenv).unwrap()
        );
        assert_eq!(g22.verify_branch_factorization().unwrap(), 1);
    }

    #[test]
    fn coxeter_matches_f3_degree() {
        for (name, m) in [
            (CaseName::G12, None),
            (CaseName::G13, None),
            (CaseName::G22, None),
            (CaseName::G2mm2, Some(3)),
            (CaseName::G2mm2, Some(6)),
        ] {
            let case = get_case(name, m).unwrap();
            assert_eq!(case.f[2].total_degree(), Some(case.coxeter));
        }
    }

    #[test]
    fn gmm2_counts_table() {
        for m in 3..=8 {
            let case = get_case(CaseName::Gmm2, Some(m)).unwrap();
            assert!(case.count_only);
            assert!(case.relation_defect().is_zero());
            case.verify_alpha_action().unwrap();
            let r = case.verify_branch_factorization().unwrap();
            assert_eq!(r, if m % 2 == 0 { 2 } else { 1 });
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(get_case(CaseName::G2mm2, Some(2)).is_err());
        assert!(get_case(CaseName::G2mm2, Some(13)).is_err());
        assert!(get_case(CaseName::G2mm2, None).is_err());
        assert!(CaseName::parse("g14").is_err());
    }
}
