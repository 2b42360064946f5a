use splitlp_core::experiment::{gen_random_program, min_split_size, point_seed, GenConfig, HeadPolicy, Ratio};
use splitlp_core::{AtomId, AtomSet, Program};

fn brute_min(p: &Program) -> Option<usize> {
    let atoms: Vec<AtomId> = p.atoms().iter().collect();
    (1..1u64 << atoms.len())
        .map(|m| atoms.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &a)| a).collect::<AtomSet>())
        .filter(|u| {
            p.rules().iter().all(|r| {
                let all: AtomSet = r.head().iter().chain(r.body_pos()).chain(r.body_neg()).copied().collect();
                !r.head().iter().any(|&h| u.contains(h)) || all.is_subset(u)
            })
        })
        .map(|u| u.len())
        .min()
}

#[test]
fn measured_sizes_match_brute_force() {
    let mut checked = 0;
    for n in [3u32, 5, 8, 10, 12] {
        for ratio in ["0.5", "1", "2", "3.5", "4.25", "6"] {
            for policy in [HeadPolicy::NonEmpty, HeadPolicy::All8] {
                for i in 0..6 {
                    let cfg = GenConfig { num_vars: n, ratio: ratio.parse().unwrap(), seed: point_seed(7, n as u64, i), head_policy: policy };
                    let p = gen_random_program(&cfg).unwrap();
                    assert_eq!(min_split_size(&p), brute_min(&p), "{cfg:?}");
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, 360);
}

#[test]
fn generated_programs_have_the_right_shape() {
    for policy in [HeadPolicy::NonEmpty, HeadPolicy::All8] {
        let cfg = GenConfig { num_vars: 20, ratio: Ratio::new(17, 4).unwrap(), seed: 99, head_policy: policy };
        let p = gen_random_program(&cfg).unwrap();
        assert_eq!(p.len(), 85);
        for r in p.rules() {
            assert!(r.body_neg().is_empty());
            assert_eq!(r.head().len() + r.body_pos().len(), 3);
            if policy == HeadPolicy::NonEmpty {
                assert!(!r.head().is_empty());
            }
        }
        assert_eq!(gen_random_program(&cfg).unwrap(), p);
    }
}

#[test]
fn one_rule_uses_all_three_vars() {
    let cfg = GenConfig { num_vars: 3, ratio: Ratio::new(1, 3).unwrap(), seed: 1, head_policy: HeadPolicy::NonEmpty };
    let p = gen_random_program(&cfg).unwrap();
    assert_eq!(p.len(), 1);
    assert_eq!(p.atoms().len(), 3);
}
