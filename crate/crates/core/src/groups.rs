//! Finite matrix groups: closure from generators, conjugacy classes,
//! determinant-one subgroups, reflections, centers.

use crate::cyclo::CycNum;
use crate::error::Error;
use crate::poly::Mat2;
use std::collections::HashMap;
use std::sync::Arc;

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Explicit finite subgroup of GL(2, C). Element 0 is the identity; the
/// element list and all derived indexing are deterministic (BFS order).
pub struct FiniteMatrixGroup {
    pub name: String,
    pub elements: Vec<Mat2>,
    index: HashMap<Mat2, usize>,
    inverses: Vec<usize>,
    pub generator_indices: Vec<usize>,
}

/// Conjugacy classes of a group: a partition of element indices with the
/// identity's class first.
pub struct ConjClasses {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub reps: Vec<usize>,
}

impl ConjClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn size(&self, i: usize) -> usize {
        self.classes[i].len()
    }
}

/// Breadth-first closure of a generator list under multiplication.
pub fn closure(name: &str, gens: &[Mat2], cap: usize) -> Result<FiniteMatrixGroup, Error> {
    for g in gens {
        assert!(!g.det().is_zero(), "generator must be invertible");
    }
    let field = gens
        .first()
        .expect("need at least one generator")
        .field()
        .clone();
    let id = Mat2::identity(&field);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0usize);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &ei in &frontier {
            for g in gens {
                let p = elements[ei].mul(g);
                if !index.contains_key(&p) {
                    let idx = elements.len();
                    index.insert(p.clone(), idx);
                    elements.push(p);
                    next.push(idx);
                    if elements.len() > cap {
                        return Err(Error::ClosureCap { cap });
                    }
                }
            }
        }
        frontier = next;
    }
    let inverses: Vec<usize> = elements
        .iter()
        .map(|e| {
            *index
                .get(&e.inv())
                .expect("closure not inverse-closed (impossible for finite)")
        })
        .collect();
    let generator_indices = gens.iter().map(|g| index[g]).collect();
    Ok(FiniteMatrixGroup {
        name: name.to_string(),
        elements,
        index,
        inverses,
        generator_indices,
    })
}

impl FiniteMatrixGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &Mat2) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.index.contains_key(m)
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn mul_idx(&self, i: usize, j: usize) -> usize {
        let p = self.elements[i].mul(&self.elements[j]);
        self.index[&p]
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut cur = i;
        let mut n = 1;
        while cur != 0 {
            cur = self.mul_idx(cur, i);
            n += 1;
            assert!(n <= self.order(), "element order exceeds group order");
        }
        n
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        let mut e = 1usize;
        for i in 0..self.order() {
            e = num_integer::lcm(e, self.element_order(i));
        }
        e
    }

    /// Subgroup of determinant-one elements, as its own group.
    pub fn det_one_subgroup(&self, name: &str) -> FiniteMatrixGroup {
        let one = CycNum::one(self.elements[0].field());
        let kept: Vec<Mat2> = self
            .elements
            .iter()
            .filter(|m| m.det() == one)
            .cloned()
            .collect();
        let mut index = HashMap::new();
        for (i, m) in kept.iter().enumerate() {
            index.insert(m.clone(), i);
        }
        let inverses = kept.iter().map(|m| index[&m.inv()]).collect();
        // keep whichever original generators landed inside
        let generator_indices = self
            .generator_indices
            .iter()
            .filter_map(|&gi| index.get(&self.elements[gi]).copied())
            .collect();
        FiniteMatrixGroup {
            name: name.to_string(),
            elements: kept,
            index,
            inverses,
            generator_indices,
        }
    }

    pub fn conjugacy_classes(&self) -> ConjClasses {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut reps = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            let mut members = Vec::new();
            for g in 0..n {
                let conj = self.mul_idx(self.mul_idx(g, i), self.inverses[g]);
                if class_of[conj] == usize::MAX {
                    class_of[conj] = cid;
                    members.push(conj);
                }
            }
            members.sort_unstable();
            reps.push(i);
            classes.push(members);
        }
        ConjClasses {
            classes,
            class_of,
            reps,
        }
    }

    /// A reflection is a non-identity element g with rank(g - I) = 1.
    pub fn is_reflection(&self, i: usize) -> bool {
        if i == 0 {
            return false;
        }
        let m = &self.elements[i];
        let field = m.field();
        let one = CycNum::one(field);
        let a = &m.a - &one;
        let d = &m.d - &one;
        let det = &(&a * &d) - &(&m.b * &m.c);
        let nonzero = !a.is_zero() || !d.is_zero() || !m.b.is_zero() || !m.c.is_zero();
        nonzero && det.is_zero()
    }

    /// Number of conjugacy classes consisting entirely of reflections.
    pub fn reflection_classes(&self, classes: &ConjClasses) -> usize {
        classes
            .classes
            .iter()
            .filter(|cl| cl.iter().all(|&i| self.is_reflection(i)))
            .count()
    }

    pub fn center_order(&self) -> usize {
        (0..self.order())
            .filter(|&i| {
                self.generator_indices
                    .iter()
                    .all(|&g| self.mul_idx(i, g) == self.mul_idx(g, i))
            })
            .count()
    }

    /// Element indices of this group inside a supergroup.
    pub fn embed_indices(&self, ambient: &FiniteMatrixGroup) -> Vec<usize> {
        self.elements
            .iter()
            .map(|m| ambient.index_of(m).expect("subgroup element not in group"))
            .collect()
    }

    pub fn field(&self) -> &Arc<crate::cyclo::CycField> {
        self.elements[0].field()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::CycField;

    #[test]
    fn z2_closure() {
        let f = CycField::new(4);
        let minus = Mat2::new(
            CycNum::from_int(&f, -1),
            CycNum::zero(&f),
            CycNum::zero(&f),
            CycNum::from_int(&f, -1),
        );
        let g = closure("z2", &[minus.clone()], 10).unwrap();
        assert_eq!(g.order(), 2);
        // det(-I) = 1, so the det-one subgroup is everything
        assert_eq!(g.det_one_subgroup("z2").order(), 2);
        let cls = g.conjugacy_classes();
        assert_eq!(cls.count(), 2);
        assert!(!g.is_reflection(1));
        assert_eq!(g.element_order(1), 2);
        assert_eq!(g.exponent(), 2);
    }

    #[test]
    fn closure_cap_errors() {
        // an infinite group: integer translations-as-shears
        let f = CycField::new(4);
        let shear = Mat2::new(
            CycNum::one(&f),
            CycNum::one(&f),
            CycNum::zero(&f),
            CycNum::one(&f),
        );
        assert!(matches!(
            closure("shear", &[shear], 50),
            Err(Error::ClosureCap { cap: 50 })
        ));
    }

    #[test]
    fn trivial_group_one_class() {
        let f = CycField::new(4);
        let g = closure("triv", &[Mat2::identity(&f)], 10).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.conjugacy_classes().count(), 1);
    }
}
