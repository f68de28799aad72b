//! Random valid class models and regression data.

use std::collections::BTreeSet;

use moodkit::{AttributeDecl, ClassDecl, ClassModel, Dataset, MethodDecl, Visibility};
use rand::seq::SliceRandom;
use rand::Rng;

fn visibility<R: Rng>(rng: &mut R) -> Visibility {
    if rng.random_bool(0.4) {
        Visibility::Hidden
    } else {
        Visibility::Visible
    }
}

/// A model with `1..=max_classes` classes that passes validation.
///
/// Parents always precede children in the generated order; new methods and
/// attributes get globally fresh names so nothing is shadowed, and
/// overrides target a name available in a strict ancestor.
pub fn random_model<R: Rng>(rng: &mut R, max_classes: usize) -> ClassModel {
    let n = rng.random_range(1..=max_classes);
    let names: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
    let mut parents: Vec<Vec<usize>> = Vec::with_capacity(n);
    // method names available in each class (declared or inherited)
    let mut available: Vec<BTreeSet<String>> = Vec::with_capacity(n);
    let mut ancestors: Vec<BTreeSet<usize>> = Vec::with_capacity(n);
    let mut classes = Vec::with_capacity(n);
    let mut fresh = 0usize;

    for i in 0..n {
        let mut ps = Vec::new();
        for j in 0..i {
            if ps.len() < 3 && rng.random_bool(0.35) {
                ps.push(j);
            }
        }
        ps.shuffle(rng);
        let mut anc = BTreeSet::new();
        let mut inherited = BTreeSet::new();
        for &p in &ps {
            anc.insert(p);
            anc.extend(ancestors[p].iter().copied());
            inherited.extend(available[p].iter().cloned());
        }

        let mut decl = ClassDecl::new(names[i].clone());
        decl.parents = ps.iter().map(|&p| names[p].clone()).collect();

        for name in &inherited {
            if rng.random_bool(0.3) {
                let candidates: Vec<usize> = anc
                    .iter()
                    .copied()
                    .filter(|&a| available[a].contains(name))
                    .collect();
                let target = candidates[rng.random_range(0..candidates.len())];
                decl.methods.push(
                    MethodDecl::new(name.clone(), visibility(rng))
                        .overriding(names[target].clone(), name.clone()),
                );
            }
        }
        for _ in 0..rng.random_range(0..=3) {
            fresh += 1;
            decl.methods
                .push(MethodDecl::new(format!("m{fresh}"), visibility(rng)));
        }
        decl.methods.shuffle(rng);
        for _ in 0..rng.random_range(0..=3) {
            fresh += 1;
            decl.attributes.push(AttributeDecl {
                name: format!("a{fresh}"),
                visibility: visibility(rng),
            });
        }

        let mut avail = inherited;
        avail.extend(decl.methods.iter().map(|m| m.name.clone()));
        available.push(avail);
        ancestors.push(anc);
        parents.push(ps);
        classes.push(decl);
    }

    if n > 1 {
        for (i, decl) in classes.iter_mut().enumerate() {
            for _ in 0..rng.random_range(0..=3) {
                let j = rng.random_range(0..n);
                if j != i {
                    decl.uses.push(names[j].clone());
                }
            }
        }
    }
    ClassModel::new(classes)
}

/// Consistently renames every class (and every reference to it).
pub fn rename_classes(model: &ClassModel, rename: impl Fn(&str) -> String) -> ClassModel {
    model
        .classes()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.name = rename(&c.name);
            c.parents = c.parents.iter().map(|p| rename(p)).collect();
            c.uses = c.uses.iter().map(|u| rename(u)).collect();
            for m in &mut c.methods {
                if let moodkit::MethodKind::Override(t) = &mut m.kind {
                    t.class = rename(&t.class);
                }
            }
            c
        })
        .collect()
}

/// `n` rows of `k` uniform predictors in `[-10, 10)` (three decimals) and a
/// response `y = Xβ + noise`. Returns `(columns, y)` with columns excluding
/// the intercept.
pub fn regression_data<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    noise: f64,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let columns: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            (0..n)
                .map(|_| (rng.random_range(-10.0..10.0f64) * 1000.0).round() / 1000.0)
                .collect()
        })
        .collect();
    let beta: Vec<f64> = (0..=k).map(|_| rng.random_range(-5.0..5.0)).collect();
    let y = (0..n)
        .map(|i| {
            beta[0]
                + columns
                    .iter()
                    .zip(&beta[1..])
                    .map(|(c, b)| c[i] * b)
                    .sum::<f64>()
                + noise * rng.random_range(-1.0..1.0)
        })
        .collect();
    (columns, y)
}

/// [`regression_data`] packaged as a dataset with columns `y, x1, …, xk`.
pub fn regression_dataset<R: Rng>(rng: &mut R, n: usize, k: usize, noise: f64) -> Dataset {
    let (columns, y) = regression_data(rng, n, k, noise);
    let mut names = vec!["y".to_owned()];
    names.extend((1..=k).map(|i| format!("x{i}")));
    let rows = (0..n)
        .map(|i| {
            std::iter::once(y[i])
                .chain(columns.iter().map(|c| c[i]))
                .collect()
        })
        .collect();
    Dataset::new(names, rows, "synthetic").expect("finite synthetic data")
}
