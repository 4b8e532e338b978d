//! Per-case verification pipeline: group structure, invariant relations,
//! character tables and quivers, fixed-locus classification, family limits,
//! and the decomposition count identities.

use crate::catalog::{self, CaseName, CurveKind, ExpectedAction, GroupCase};
use crate::cyclo::CycNum;
use crate::error::Error;
use crate::groups::{closure, ConjClasses, FiniteMatrixGroup, DEFAULT_CLOSURE_CAP};
use crate::hilb::{self, CurveActionResult, CurveAnalysis, QuotientCtx, Span};
use crate::poly::Mat2;
use crate::report::{Report, ReportBuilder};
use crate::reps::{
    self, character_table, epsilon_character, find_row, mckay_quiver, quiver_matches_template,
    CharacterTable, Quiver,
};
use crate::sod;

/// Everything computed for one case; reused by the quiver and fixed-locus
/// commands so their output matches what `verify` checked.
pub struct CaseArtifacts {
    pub case: GroupCase,
    pub g_group: FiniteMatrixGroup,
    pub h_group: FiniteMatrixGroup,
    pub g_classes: ConjClasses,
    pub h_classes: ConjClasses,
    pub g_table: CharacterTable,
    pub h_table: CharacterTable,
    pub g_quiver: Quiver,
    pub h_quiver: Quiver,
}

pub fn build_groups(case: &GroupCase) -> Result<(FiniteMatrixGroup, FiniteMatrixGroup), Error> {
    let gens_g: Vec<Mat2> = case.gens_g.iter().map(|(_, m)| m.clone()).collect();
    let gens_h: Vec<Mat2> = case.gens_h.iter().map(|(_, m)| m.clone()).collect();
    let g = closure(&format!("{}:G", case.label), &gens_g, DEFAULT_CLOSURE_CAP)?;
    let h = closure(&format!("{}:H", case.label), &gens_h, DEFAULT_CLOSURE_CAP)?;
    Ok((g, h))
}

pub fn build_artifacts(name: CaseName, m: Option<u32>, seed: u64) -> Result<CaseArtifacts, Error> {
    let case = catalog::get_case(name, m)?;
    let (g_group, h_group) = build_groups(&case)?;
    let g_classes = g_group.conjugacy_classes();
    let h_classes = h_group.conjugacy_classes();
    let g_table = character_table(&g_group, &g_classes, seed)?;
    let h_table = character_table(&h_group, &h_classes, seed)?;
    let g_quiver = mckay_quiver(&g_group, &g_classes, &g_table)?;
    let h_quiver = mckay_quiver(&h_group, &h_classes, &h_table)?;
    Ok(CaseArtifacts {
        case,
        g_group,
        h_group,
        g_classes,
        h_classes,
        g_table,
        h_table,
        g_quiver,
        h_quiver,
    })
}

/// Run the full check battery for one case.
pub fn verify_case(name: CaseName, m: Option<u32>, seed: u64) -> Report {
    let label = match (name, m) {
        (CaseName::Gmm2, Some(m)) => format!("gmm2(m={})", m),
        (CaseName::G2mm2, Some(m)) => format!("g2mm2(m={})", m),
        (CaseName::G12, _) => "g12".to_string(),
        (CaseName::G13, _) => "g13".to_string(),
        (CaseName::G22, _) => "g22".to_string(),
        _ => "invalid".to_string(),
    };
    let mut rb = ReportBuilder::new(&label);
    match verify_case_inner(name, m, seed, &mut rb) {
        Ok(()) => {}
        Err(e) => rb.fail("setup", "case construction", e.to_string()),
    }
    rb.finish()
}

fn verify_case_inner(
    name: CaseName,
    m: Option<u32>,
    seed: u64,
    rb: &mut ReportBuilder,
) -> Result<(), Error> {
    let case = catalog::get_case(name, m)?;
    let cl = case.label.clone();

    // -- catalog and invariant-ring checks ------------------------------
    rb.record(
        &format!("alpha_action.{}", cl),
        "f1, f2 fixed; f3 negated",
        case.verify_alpha_action(),
        |_| "alpha acts as (+, +, -) on (f1, f2, f3); H fixes all three".into(),
    );
    let defect = case.relation_defect();
    rb.check(
        &format!("relation.{}", cl),
        "f3^2 = q(f1, f2)",
        defect.is_zero(),
        if defect.is_zero() {
            format!("f3^2 - q(f1,f2) = 0 with q = {}", case.relation.render())
        } else {
            format!("nonzero defect: {}", defect.render())
        },
    );
    let r = match rb.record(
        &format!("branch.{}", cl),
        "p(u,v) factors into the branch components",
        case.verify_branch_factorization(),
        |r| format!("{} component(s)", r),
    ) {
        Some(r) => r,
        None => return Ok(()),
    };
    rb.check(
        &format!("branch.count.{}", cl),
        "component count per the invariant-ring table",
        r == case.expected.reflection_classes,
        format!(
            "r = {} (table value {})",
            r, case.expected.reflection_classes
        ),
    );

    // -- group structure --------------------------------------------------
    let (g_group, h_group) = build_groups(&case)?;
    rb.check(
        &format!("group.order.g.{}", cl),
        "group order from closure",
        g_group.order() == case.expected.order_g,
        format!(
            "|G| = {} (expected {})",
            g_group.order(),
            case.expected.order_g
        ),
    );
    rb.check(
        &format!("group.order.h.{}", cl),
        "determinant-one subgroup order",
        h_group.order() == case.expected.order_h,
        format!(
            "|H| = {} (expected {})",
            h_group.order(),
            case.expected.order_h
        ),
    );
    let det_one = g_group.det_one_subgroup("det1");
    let same_h = det_one.order() == h_group.order()
        && det_one.elements.iter().all(|e| h_group.contains(e));
    rb.check(
        &format!("group.index2.{}", cl),
        "H = G meet SL(2, C) has index 2",
        same_h && 2 * h_group.order() == g_group.order(),
        format!(
            "det-one subgroup has order {}, index {}",
            det_one.order(),
            g_group.order() / det_one.order().max(1)
        ),
    );
    if let Some(zc) = case.expected.center_g {
        rb.check(
            &format!("group.center.{}", cl),
            "center is cyclic of order 4",
            g_group.center_order() == zc,
            format!("|Z(G)| = {} (expected {})", g_group.center_order(), zc),
        );
    }
    if !case.count_only {
        let minus_i = {
            let f = &case.field;
            Mat2::new(
                CycNum::from_int(f, -1),
                CycNum::zero(f),
                CycNum::zero(f),
                CycNum::from_int(f, -1),
            )
        };
        let central = h_group.contains(&minus_i);
        rb.check(
            &format!("group.minus_one.{}", cl),
            "-I lies in H and is central",
            central && {
                let idx = h_group.index_of(&minus_i).unwrap();
                (0..h_group.order()).all(|i| {
                    h_group.mul_idx(i, idx) == h_group.mul_idx(idx, i)
                })
            },
            "-I found and central in H".into(),
        );
    }

    let g_classes = g_group.conjugacy_classes();
    let h_classes = h_group.conjugacy_classes();
    rb.check(
        &format!("classes.g.{}", cl),
        "conjugacy class count of G",
        g_classes.count() == case.expected.classes_g,
        format!(
            "{} classes (expected {})",
            g_classes.count(),
            case.expected.classes_g
        ),
    );
    rb.check(
        &format!("classes.h.{}", cl),
        "conjugacy class count of H",
        h_classes.count() == case.expected.classes_h,
        format!(
            "{} classes (expected {})",
            h_classes.count(),
            case.expected.classes_h
        ),
    );
    // Lagrange sanity
    let lagrange = g_classes.classes.iter().all(|c| {
        g_group.order() % c.len() == 0
    }) && g_classes.classes.iter().map(|c| c.len()).sum::<usize>() == g_group.order();
    rb.check(
        &format!("classes.lagrange.{}", cl),
        "class sizes divide the group order and partition it",
        lagrange,
        "class sizes divide |G| and sum to |G|".into(),
    );
    let refl = g_group.reflection_classes(&g_classes);
    rb.check(
        &format!("reflection_classes.{}", cl),
        "reflections have rank(g - I) = 1",
        refl == case.expected.reflection_classes,
        format!(
            "{} reflection class(es) (expected {})",
            refl, case.expected.reflection_classes
        ),
    );
    // every reflection squares to the identity
    let refl_sq = (0..g_group.order())
        .filter(|&i| g_group.is_reflection(i))
        .all(|i| g_group.mul_idx(i, i) == 0);
    rb.check(
        &format!("reflection.order2.{}", cl),
        "generated by order-2 reflections",
        refl_sq,
        "all reflections square to the identity".into(),
    );

    // -- character tables and quivers -------------------------------------
    let g_table = match rb.record(
        &format!("table.g.{}", cl),
        "exact character table; orthogonality",
        character_table(&g_group, &g_classes, seed),
        |t| {
            format!(
                "{} irreducibles, sum deg^2 = {}",
                t.num_irreps(),
                t.sum_degree_squares()
            )
        },
    ) {
        Some(t) => t,
        None => return Ok(()),
    };
    let h_table = match rb.record(
        &format!("table.h.{}", cl),
        "exact character table; orthogonality",
        character_table(&h_group, &h_classes, seed),
        |t| {
            format!(
                "{} irreducibles, sum deg^2 = {}",
                t.num_irreps(),
                t.sum_degree_squares()
            )
        },
    ) {
        Some(t) => t,
        None => return Ok(()),
    };
    rb.check(
        &format!("table.counts.{}", cl),
        "#irreducibles equals #classes",
        g_table.num_irreps() == g_classes.count() && h_table.num_irreps() == h_classes.count(),
        format!(
            "G: {} = {}, H: {} = {}",
            g_table.num_irreps(),
            g_classes.count(),
            h_table.num_irreps(),
            h_classes.count()
        ),
    );

    let g_quiver = match rb.record(
        &format!("quiver.g.{}", cl),
        "McKay adjacency from character inner products",
        mckay_quiver(&g_group, &g_classes, &g_table),
        |q| format!("{} vertices", q.num_vertices()),
    ) {
        Some(q) => q,
        None => return Ok(()),
    };
    let h_quiver = match rb.record(
        &format!("quiver.h.{}", cl),
        "McKay adjacency from character inner products",
        mckay_quiver(&h_group, &h_classes, &h_table),
        |q| format!("{} vertices", q.num_vertices()),
    ) {
        Some(q) => q,
        None => return Ok(()),
    };
    rb.check(
        &format!("quiver.nullvector.g.{}", cl),
        "sum_j A[i][j] deg_j = 2 deg_i",
        g_quiver.null_vector_check(),
        "null-vector identity holds on the G-quiver".into(),
    );
    rb.check(
        &format!("quiver.nullvector.h.{}", cl),
        "sum_j A[i][j] deg_j = 2 deg_i",
        h_quiver.null_vector_check(),
        "null-vector identity holds on the H-quiver".into(),
    );
    rb.check(
        &format!("quiver.shape.h.{}", cl),
        "H-quiver is the affine Dynkin graph",
        h_quiver.is_symmetric()
            && quiver_matches_template(&h_quiver, case.expected.quiver_h),
        format!(
            "underlying graph isomorphic to {:?}",
            case.expected.quiver_h
        ),
    );
    rb.check(
        &format!("quiver.vertices.g.{}", cl),
        "G-quiver vertex count",
        g_quiver.num_vertices() == case.expected.classes_g,
        format!(
            "{} vertices (expected {})",
            g_quiver.num_vertices(),
            case.expected.classes_g
        ),
    );

    // epsilon and the induction/restriction pattern
    let eps = epsilon_character(&g_group, &g_classes, &h_group);
    rb.check(
        &format!("epsilon.{}", cl),
        "sign character of the index-2 coset",
        find_row(&g_table, &eps).is_some(),
        "epsilon is a character table row".into(),
    );
    let eps_sq: Vec<CycNum> = eps.iter().map(|v| v * v).collect();
    let trivial: Vec<CycNum> = (0..g_classes.count())
        .map(|_| CycNum::one(&case.field))
        .collect();
    rb.check(
        &format!("epsilon.square.{}", cl),
        "epsilon^2 is trivial",
        eps_sq == trivial,
        "epsilon squared is the trivial character".into(),
    );
    // epsilon twist permutes the irreducibles
    let twist_ok = (0..g_table.num_irreps()).all(|i| {
        let twisted: Vec<CycNum> = (0..g_classes.count())
            .map(|c| &g_table.values[i][c] * &eps[c])
            .collect();
        find_row(&g_table, &twisted).is_some()
    });
    rb.check(
        &format!("epsilon.twist.{}", cl),
        "tensoring with epsilon permutes the irreducibles",
        twist_ok,
        "epsilon twist is a permutation of the table rows".into(),
    );
    // epsilon is -1 on every reflection class
    let refl_eps = (0..g_classes.count()).all(|c| {
        let rep = g_classes.reps[c];
        !g_group.is_reflection(rep) || eps[c] == CycNum::from_int(&case.field, -1)
    });
    rb.check(
        &format!("epsilon.reflections.{}", cl),
        "reflections lie outside H",
        refl_eps,
        "epsilon = -1 on every reflection class".into(),
    );
    rb.record(
        &format!("induction.{}", cl),
        "index-2 induction/restriction pattern",
        reps::verify_induction_pattern(
            &g_group, &g_classes, &g_table, &h_group, &h_classes, &h_table,
        ),
        |notes| format!("{} H-irreps checked", notes.len()),
    );

    // -- A-type case: counts only -----------------------------------------
    if case.count_only {
        let m_val = case.m.unwrap();
        let counts = match rb.record(
            &format!("counts.{}", cl),
            "published A-type decomposition counts",
            sod::gmm2_counts(m_val, g_classes.count(), r),
            |c| format!("r = {}, n = {}, total = {}", c.r, c.n, c.total),
        ) {
            Some(c) => c,
            None => return Ok(()),
        };
        rb.record(
            &format!("theorem_a.{}", cl),
            "n + r + 1 equals the class count",
            sod::theorem_a_check(&counts, g_classes.count()),
            |_| {
                format!(
                    "{} + {} + 1 = {}",
                    counts.n,
                    counts.r,
                    g_classes.count()
                )
            },
        );
        rb.record(
            &format!("corollary_b.{}", cl),
            "reflection classes match branch components",
            sod::corollary_b_check(refl, r),
            |_| format!("{} = {}", refl, r),
        );
        return Ok(());
    }

    // -- per-curve module validation ---------------------------------------
    let ctx = QuotientCtx::new(&case);
    for curve in &case.curves {
        let id = format!("module.{}.{}", cl, curve.label);
        let result = validate_curve_modules(&case, &ctx, curve, &h_group, &h_classes, &h_table);
        rb.record(
            &id,
            "module dimensions, degrees, and H-stability",
            result,
            |d| d.clone(),
        );
    }

    // -- fixed-locus classification ----------------------------------------
    let analyses = match rb.record(
        &format!("fixed_locus.build.{}", cl),
        "ambient modules, probe points, and the involution",
        hilb::classify_all(&case, &ctx, &h_group, &h_classes, &h_table),
        |a| format!("{} curves classified", a.len()),
    ) {
        Some(a) => a,
        None => return Ok(()),
    };
    for (curve, analysis) in case.curves.iter().zip(&analyses) {
        let expected_ok = match (&curve.expected, &analysis.result) {
            (ExpectedAction::Pointwise, CurveActionResult::PointwiseFixed) => true,
            (ExpectedAction::ExchangedWith(w), CurveActionResult::ExchangedWith(g)) => w == g,
            (
                ExpectedAction::Involution { fixed: w },
                CurveActionResult::Involution { fixed: g },
            ) => {
                let mut ws: Vec<&String> = w.iter().collect();
                let mut gs: Vec<&String> = g.iter().collect();
                ws.sort();
                gs.sort();
                ws == gs
            }
            _ => false,
        };
        rb.check(
            &format!("curve.{}.{}", cl, curve.label),
            "fixed-locus classification",
            expected_ok,
            analysis.result.describe(),
        );
    }
    rb.record(
        &format!("exchange.symmetry.{}", cl),
        "exchanged-with is symmetric",
        check_exchange_symmetry(&analyses),
        |_| "exchange pairs are mutual".into(),
    );
    rb.record(
        &format!("alpha.squared.{}", cl),
        "the residual action is an involution",
        hilb::verify_alpha_squared(&case, &ctx, &analyses),
        |_| "alpha^2 fixes every ambient module and catalog point".into(),
    );

    // -- structural identities ----------------------------------------------
    rb.record(
        &format!("identities.{}", cl),
        "displayed action identities",
        hilb::verify_structural_identities(&case),
        |n| format!("{} identities verified at 3 instantiations", n),
    );

    // -- Moebius maps ---------------------------------------------------------
    for spec in &case.params {
        rb.record(
            &format!("mobius.{}.{}", cl, spec.curve),
            "induced map on the parametrized curve",
            hilb::verify_mobius(&case, &ctx, spec),
            |r| {
                if r.is_scalar {
                    "scalar (identity) map".to_string()
                } else {
                    format!(
                        "matrix {} with {} fixed point(s)",
                        r.matrix.render(),
                        r.fixed.len()
                    )
                }
            },
        );
    }

    // -- families and isolated points ----------------------------------------
    for fam in &case.families {
        let id = format!("family.{}.{}", cl, fam.label);
        let result = hilb::family_limit_contains_multi(&h_group, &fam.dir, &fam.gens)
            .and_then(|oks| {
                if oks.iter().all(|&b| b) {
                    Ok(oks.len())
                } else {
                    Err(Error::FixedLocus(format!(
                        "{} of {} membership solves failed",
                        oks.iter().filter(|&&b| !b).count(),
                        oks.len()
                    )))
                }
            });
        rb.record(
            &id,
            "limit ideal contains the module generators",
            result,
            |n| format!("{} generator membership solve(s) passed", n),
        );
    }
    rb.record(
        &format!("isolated.{}", cl),
        "no isolated fixed points remain",
        hilb::isolated_point_resolution(&case, &ctx, &h_group, &analyses),
        |notes| format!("{} isolated point(s) resolved", notes.len()),
    );

    // -- headline identities ---------------------------------------------------
    let counts = match rb.record(
        &format!("counts.{}", cl),
        "n derived from verified geometry",
        sod::sod_counts(&analyses, r, h_classes.count()),
        |c| {
            format!(
                "P = {}, C = {}, X = {}, n = {}, r = {}",
                c.pointwise, c.curves, c.exchanged_pairs, c.n, c.r
            )
        },
    ) {
        Some(c) => c,
        None => return Ok(()),
    };
    rb.check(
        &format!("counts.expected_n.{}", cl),
        "derived n matches the catalog target",
        counts.n == case.expected.n_exceptional,
        format!(
            "n = {} (expected {})",
            counts.n, case.expected.n_exceptional
        ),
    );
    rb.record(
        &format!("theorem_a.{}", cl),
        "n + r + 1 equals the class count",
        sod::theorem_a_check(&counts, g_classes.count()),
        |_| {
            format!(
                "{} + {} + 1 = {}",
                counts.n,
                counts.r,
                g_classes.count()
            )
        },
    );
    rb.record(
        &format!("corollary_b.{}", cl),
        "reflection classes match branch components",
        sod::corollary_b_check(refl, r),
        |_| format!("{} = {}", refl, r),
    );
    rb.record(
        &format!("contragredient.{}", cl),
        "curve exchanged iff its character is not real-valued",
        sod::verify_contragredient_pattern(&case, &analyses, &h_table),
        |_| "exchange pattern matches self-contragredience".into(),
    );
    Ok(())
}

fn check_exchange_symmetry(analyses: &[CurveAnalysis]) -> Result<(), Error> {
    for a in analyses {
        if let CurveActionResult::ExchangedWith(p) = &a.result {
            let partner = analyses
                .iter()
                .find(|b| &b.label == p)
                .ok_or_else(|| Error::FixedLocus(format!("partner {} missing", p)))?;
            match &partner.result {
                CurveActionResult::ExchangedWith(q) if q == &a.label => {}
                _ => {
                    return Err(Error::FixedLocus(format!(
                        "exchange not symmetric between {} and {}",
                        a.label, p
                    )))
                }
            }
        }
    }
    Ok(())
}

fn validate_curve_modules(
    case: &GroupCase,
    ctx: &QuotientCtx,
    curve: &crate::catalog::CurveSpec,
    h_group: &FiniteMatrixGroup,
    h_classes: &ConjClasses,
    h_table: &CharacterTable,
) -> Result<String, Error> {
    let h = case.coxeter;
    match curve.kind {
        CurveKind::Ordinary => {
            let dm = homogeneous_degree(&curve.minus)?;
            let dp = homogeneous_degree(&curve.plus)?;
            if dm + dp != h {
                return Err(Error::Validation(format!(
                    "degrees {} + {} of {} do not sum to the Coxeter number {}",
                    dm, dp, curve.label, h
                )));
            }
            if dm >= dp {
                return Err(Error::Validation(format!(
                    "minus degree {} is not below plus degree {}",
                    dm, dp
                )));
            }
            let minus = Span::new(ctx, &curve.minus);
            let plus = Span::new(ctx, &curve.plus);
            for (name, span) in [("minus", &minus), ("plus", &plus)] {
                if span.dim() as u32 != curve.dim {
                    return Err(Error::Validation(format!(
                        "{} module of {} has dim {} (expected {})",
                        name,
                        curve.label,
                        span.dim(),
                        curve.dim
                    )));
                }
                if !span.is_h_submodule(ctx, &case.gens_h) {
                    return Err(Error::Validation(format!(
                        "{} module of {} is not H-stable",
                        name, curve.label
                    )));
                }
                let mults = hilb::span_rep_type(span, ctx, h_group, h_classes, h_table)?;
                let nonzero: Vec<(usize, u32)> = mults
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m > 0)
                    .map(|(i, &m)| (i, m))
                    .collect();
                if nonzero.len() != 1 || nonzero[0].1 != 1 {
                    return Err(Error::Validation(format!(
                        "{} module of {} is not a single irreducible",
                        name, curve.label
                    )));
                }
            }
            Ok(format!(
                "V_{} and V_{} both irreducible of dim {}",
                dm, dp, curve.dim
            ))
        }
        CurveKind::Center => {
            if let Some(gens) = &curve.ambient_given {
                let d = homogeneous_degree(gens)?;
                if 2 * d != h {
                    return Err(Error::Validation(format!(
                        "center module degree {} is not h/2 = {}",
                        d,
                        h / 2
                    )));
                }
                let span = Span::new(ctx, gens);
                if span.dim() as u32 != 2 * curve.dim {
                    return Err(Error::Validation(format!(
                        "center module of {} has dim {} (expected {})",
                        curve.label,
                        span.dim(),
                        2 * curve.dim
                    )));
                }
                if !span.is_h_submodule(ctx, &case.gens_h) {
                    return Err(Error::Validation(format!(
                        "center module of {} is not H-stable",
                        curve.label
                    )));
                }
                let mults = hilb::span_rep_type(&span, ctx, h_group, h_classes, h_table)?;
                let ok = mults.iter().filter(|&&m| m > 0).count() == 1
                    && mults.iter().any(|&m| m == 2);
                if !ok {
                    return Err(Error::Validation(format!(
                        "center module of {} is not rho + rho",
                        curve.label
                    )));
                }
                Ok(format!("V_{} is rho^2 with dim {}", d, 2 * curve.dim))
            } else {
                Ok("ambient assembled from neighbor intersections".into())
            }
        }
    }
}

fn homogeneous_degree(gens: &[Poly]) -> Result<u32, Error> {
    let mut deg: Option<u32> = None;
    for g in gens {
        let d = g
            .total_degree()
            .ok_or_else(|| Error::Validation("zero module generator".into()))?;
        if !g.is_homogeneous_xy(d) {
            return Err(Error::Validation(format!(
                "generator {} is not homogeneous",
                g.render()
            )));
        }
        match deg {
            None => deg = Some(d),
            Some(e) if e == d => {}
            Some(e) => {
                return Err(Error::Validation(format!(
                    "mixed generator degrees {} and {}",
                    e, d
                )))
            }
        }
    }
    deg.ok_or_else(|| Error::Validation("empty module".into()))
}

use crate::poly::Poly;

/// Label text used by the CLI's fixed-locus command.
pub fn fixed_locus_lines(case: &GroupCase, analyses: &[CurveAnalysis]) -> Vec<String> {
    let mut out = Vec::new();
    for a in analyses {
        let mut line = format!("E({}): {}", a.label, a.result.describe());
        if let CurveActionResult::Involution { fixed } = &a.result {
            let witnesses: Vec<String> = fixed
                .iter()
                .map(|name| {
                    let span = a
                        .points
                        .iter()
                        .find(|(n, _, _)| n == name)
                        .map(|(_, s, _)| s.clone());
                    match span {
                        Some(s) => format!(
                            "{} = ({})",
                            name,
                            s.rows()
                                .iter()
                                .map(|p| p.render())
                                .collect::<Vec<_>>()
                                .join(", ")
                        ),
                        None => name.clone(),
                    }
                })
                .collect();
            line.push_str(&format!("\n    witnesses: {}", witnesses.join("; ")));
        }
        out.push(line);
    }
    let _ = case;
    out
}
