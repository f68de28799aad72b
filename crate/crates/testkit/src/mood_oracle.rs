//! MOOD numerators and denominators by brute-force enumeration.
//!
//! Inheritance is decided by walking every parent path: a feature declared
//! in class `A` is inherited by `C` when some path from `C` up to `A` passes
//! through no class (including `C`) that redeclares the feature's name.

use std::collections::BTreeSet;

use moodkit::{ClassDecl, ClassModel, Visibility};

/// `(numerator, denominator)` pairs in the order MHF, AHF, MIF, AIF, PF, CF.
pub type Ratios = [(usize, usize); 6];

struct Naive<'a> {
    classes: &'a [ClassDecl],
}

impl<'a> Naive<'a> {
    fn idx(&self, name: &str) -> usize {
        self.classes
            .iter()
            .position(|c| c.name == name)
            .expect("oracle requires resolvable names")
    }

    fn parents(&self, c: usize) -> Vec<usize> {
        self.classes[c]
            .parents
            .iter()
            .map(|p| self.idx(p))
            .collect()
    }

    fn is_ancestor(&self, a: usize, c: usize) -> bool {
        self.parents(c)
            .into_iter()
            .any(|p| p == a || self.is_ancestor(a, p))
    }

    /// Does a parent path from `c` reach `a` without passing through a class
    /// declaring a method called `name`?
    fn method_reaches(&self, c: usize, a: usize, name: &str) -> bool {
        self.parents(c).into_iter().any(|p| {
            p == a
                || (!self.classes[p].methods.iter().any(|m| m.name == name)
                    && self.method_reaches(p, a, name))
        })
    }
}

pub fn ratios(model: &ClassModel) -> Ratios {
    let classes = model.classes();
    let o = Naive { classes };
    let tc = classes.len();
    let mut r = [(0usize, 0usize); 6];

    for (c, decl) in classes.iter().enumerate() {
        let m_d = decl.methods.len();
        let m_h = decl
            .methods
            .iter()
            .filter(|m| m.visibility == Visibility::Hidden)
            .count();
        let a_d = decl.attributes.len();
        let a_h = decl
            .attributes
            .iter()
            .filter(|a| a.visibility == Visibility::Hidden)
            .count();

        let mut m_i = 0;
        let mut a_i = 0;
        for (a, anc) in classes.iter().enumerate() {
            if a == c || !o.is_ancestor(a, c) {
                continue;
            }
            for m in &anc.methods {
                let local = decl.methods.iter().any(|x| x.name == m.name);
                if !local && o.method_reaches(c, a, &m.name) {
                    m_i += 1;
                }
            }
            a_i += anc.attributes.len();
        }

        let m_o = decl.methods.iter().filter(|m| m.is_override()).count();
        let m_n = m_d - m_o;
        let dc = (0..tc).filter(|&d| o.is_ancestor(c, d)).count();

        r[0].0 += m_h;
        r[0].1 += m_d;
        r[1].0 += a_h;
        r[1].1 += a_d;
        r[2].0 += m_i;
        r[2].1 += m_d + m_i;
        r[3].0 += a_i;
        r[3].1 += a_d + a_i;
        r[4].0 += m_o;
        r[4].1 += m_n * dc;

        let targets: BTreeSet<usize> = decl.uses.iter().map(|u| o.idx(u)).collect();
        r[5].0 += targets
            .into_iter()
            .filter(|&j| j != c && !o.is_ancestor(j, c))
            .count();
    }
    r[5].1 = tc * tc - tc;
    r
}
