use std::collections::HashSet;

use convord_core::cartan::vneg;
use convord_core::{CartanType, FiniteRootSystem, FiniteWeylElement, NodeSet};

fn classical_count(t: CartanType, n: usize) -> usize {
    match t {
        CartanType::A => n * (n + 1),
        CartanType::B | CartanType::C => 2 * n * n,
        CartanType::D => 2 * n * (n - 1),
        CartanType::G => 12,
        CartanType::F => 48,
        CartanType::E => match n {
            6 => 72,
            7 => 126,
            _ => 240,
        },
    }
}

fn small_types() -> Vec<(CartanType, usize)> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push((CartanType::A, n));
    }
    for n in 2..=4 {
        out.push((CartanType::B, n));
        out.push((CartanType::C, n));
    }
    out.push((CartanType::D, 4));
    out.push((CartanType::G, 2));
    out.push((CartanType::F, 4));
    out
}

#[test]
fn root_counts_and_symmetry() {
    for (t, n) in small_types() {
        let f = FiniteRootSystem::build(t, n).unwrap();
        let roots = f.roots();
        assert_eq!(roots.len(), classical_count(t, n), "{t}{n}");
        let set: HashSet<_> = roots.iter().copied().collect();
        assert!(roots.iter().all(|a| set.contains(&vneg(a))), "{t}{n} not symmetric");
        for a in &roots {
            let pos = a[..n].iter().all(|&c| c >= 0);
            let neg = a[..n].iter().all(|&c| c <= 0);
            assert!(pos ^ neg, "{t}{n}: mixed signs in {a:?}");
        }
    }
}

#[test]
fn whole_group_preserves_form_and_lengths() {
    for (t, n) in small_types().into_iter().filter(|(_, n)| *n <= 3) {
        let f = FiniteRootSystem::build(t, n).unwrap();
        let roots = f.roots();
        for w in f.parabolic_elements(f.nodes()).unwrap() {
            for a in &roots {
                for b in &roots {
                    assert_eq!(f.form(&w.apply(a), &w.apply(b)), f.form(a, b));
                }
            }
            let inversions = f.positive_roots().iter().filter(|a| w.apply(a)[..n].iter().any(|&c| c < 0)).count();
            assert_eq!(f.length(&w), inversions, "{t}{n}");
            assert_eq!(f.reduced_word(&w).len(), inversions);
            assert_eq!(f.from_word(&f.reduced_word(&w)), w);
        }
    }
}

fn minimal_in_coset(f: &FiniteRootSystem, w: &FiniteWeylElement, k: NodeSet) -> bool {
    k.iter().all(|i| {
        let a = w.apply(&convord_core::cartan::unit(i));
        a[..f.rank()].iter().all(|&c| c >= 0)
    })
}

#[test]
fn coset_decomposition_roundtrip() {
    for (t, n) in small_types().into_iter().filter(|(_, n)| *n <= 3) {
        let f = FiniteRootSystem::build(t, n).unwrap();
        for j in f.nodes().subsets() {
            let elems = f.parabolic_elements(j).unwrap();
            for k in j.subsets() {
                for w in &elems {
                    let (up, down) = f.decompose_coset(j, k, w).unwrap();
                    assert_eq!(up.compose(&down), *w);
                    assert!(minimal_in_coset(&f, &up, k));
                    assert!(f.in_parabolic(k, &down));
                }
                let reps = f.minimal_coset_reps(j, k).unwrap();
                assert_eq!(reps.len() * f.parabolic_elements(k).unwrap().len(), elems.len());
            }
        }
    }
}

#[test]
fn coset_representatives_compose() {
    for (t, n) in small_types().into_iter().filter(|(_, n)| *n <= 3) {
        let f = FiniteRootSystem::build(t, n).unwrap();
        for j in f.nodes().subsets() {
            for k in j.subsets() {
                for l in k.subsets() {
                    let jk = f.minimal_coset_reps(j, k).unwrap();
                    let kl = f.minimal_coset_reps(k, l).unwrap();
                    let prod: HashSet<FiniteWeylElement> =
                        jk.iter().flat_map(|a| kl.iter().map(move |b| a.compose(b))).collect();
                    let direct: HashSet<FiniteWeylElement> = f.minimal_coset_reps(j, l).unwrap().into_iter().collect();
                    assert_eq!(prod, direct, "{t}{n} J={j} K={k} L={l}");
                }
            }
        }
    }
}

#[test]
fn cartan_json_shape() {
    let c = convord_core::build_cartan(CartanType::A, 2).unwrap();
    let v = serde_json::to_value(&c).unwrap();
    assert_eq!(v, serde_json::json!({"type":"A","rank":2,"cartan":[[2,-1],[-1,2]],"labels":[1,1,1]}));
}
