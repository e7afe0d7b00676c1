mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;
use symgame_core::classify::{
    classify, is_fully_symmetric, is_standard_symmetric, payoff_witness, subgroup_proposition,
    OnlyTransitiveCertificate,
};
use symgame_core::document::{
    game_from_json, game_to_json, generators_from_json, generators_to_json,
};
use symgame_core::fixtures;
use symgame_core::label_dep::{invariant_group, label_dep_standard_symmetric};
use symgame_core::matching::{is_strategy_trivial, matching_from_group};
use symgame_core::morphism::{are_isomorphic, automorphism_group, is_isomorphism};
use symgame_core::param::{hasse, orbit_partition, param_leq, CellPartition, ParamAssignment};
use symgame_core::{BijectionGroup, Error, Game, GameBijection, Payoff};

use common::*;

fn partition(name: &str) -> CellPartition {
    fixtures::generator_set(name).unwrap().partition()
}

fn assert_table(name: &str, rows: &[&str]) {
    let p = partition(name);
    assert_eq!(p, table_partition(p.shape(), rows), "{name}");
}

#[test]
fn two_player_family_tables() {
    assert_table("two_player/G_31", &["αα", "αα", "αα", "αα"]);
    assert_table("two_player/G_22", &["αβ", "βα", "βα", "αβ"]);
    assert_table("two_player/G_21", &["αα", "ββ", "ββ", "αα"]);
    assert_table("two_player/G_11", &["αα", "βγ", "γβ", "δδ"]);
    assert_table("example_5_6", &["αα", "βγ", "γβ", "δδ"]);
}

#[test]
fn three_player_family_tables() {
    let t = |name: &str, rows: &str| {
        let rows: Vec<&str> = rows.split(',').collect();
        assert_table(name, &rows);
    };
    t("three_player/G_41", "ααα,ααα,ααα,ααα,ααα,ααα,ααα,ααα");
    t("three_player/G_31", "ααα,βββ,βββ,ααα,βββ,ααα,ααα,βββ");
    t("three_player/G_32", "ααα,ββδ,βδβ,δββ,δββ,βδβ,ββδ,ααα");
    t("three_player/G_21", "ααα,ββδ,βδβ,σρρ,δββ,ρσρ,ρρσ,ωωω");
    t("three_player/G_22", "ααα,βγδ,γδβ,δγβ,δβγ,βδγ,γβδ,ααα");
    t("three_player/G_23", "ααα,βγδ,γδβ,δβγ,δβγ,γδβ,βγδ,ααα");
    t("three_player/G_11", "ααα,βγδ,γδβ,σρτ,δβγ,τσρ,ρτσ,ωωω");
    t("example_5_5", "ααα,βγδ,γδβ,δγβ,δβγ,βδγ,γβδ,ααα");
}

#[test]
fn four_player_tables() {
    let t = |name: &str, blocks: &str, classes: usize| {
        let rows: Vec<&str> = blocks
            .split('|')
            .flat_map(|b| b.split(',').map(str::trim))
            .collect();
        assert_eq!(rows.len(), 16);
        assert_table(name, &rows);
        assert_eq!(partition(name).class_count(), classes, "{name}");
    };
    t(
        "example_5_9a",
        "αβγδ, ρτσω, σωρτ, ωρτσ | δαβγ, τσωρ, γδαβ, βγδα | βγδα, γδαβ, τσωρ, δαβγ | ωρτσ, σωρτ, ρτσω, αβγδ",
        8,
    );
    t(
        "example_5_9b",
        "ααββ, γδδγ, δγγδ, ββαα | γδδγ, ααββ, ββαα, δγγδ | δγγδ, ββαα, ααββ, γδδγ | ββαα, δγγδ, γδδγ, ααββ",
        4,
    );
    t(
        "example_5_10",
        "αβββ, βαββ, βββα, βββα | ββαβ, βαββ, ββαβ, αβββ | αβββ, ββαβ, βαββ, ββαβ | βββα, βββα, βαββ, αβββ",
        2,
    );
}

#[test]
fn six_player_table_is_the_orbit_partition() {
    let game = fixtures::game("example_5_11").unwrap();
    let numeric = CellPartition::from_labels(game.shape_arc().clone(), game.payoffs()).unwrap();
    assert_eq!(numeric.class_count(), 32);
    let set = fixtures::generator_set("example_5_11").unwrap();
    assert_eq!(**set.shape(), *game.shape());
    assert_eq!(set.partition().classes(), numeric.classes());
}

#[test]
fn one_orbit_and_empty_generators() {
    assert_eq!(partition("one_orbit").class_count(), 1);
    let s = Arc::new(symgame_core::Shape::uniform(3, 2).unwrap());
    let p = orbit_partition(&s, &[]).unwrap();
    assert_eq!(p.class_count(), 24);
    assert_eq!(p, CellPartition::finest(s));
}

#[test]
fn generators_are_automorphisms_of_instances() {
    for name in fixtures::example_names() {
        let set = fixtures::generator_set(name).unwrap();
        let game = set.partition().generic_game();
        for g in set.generators() {
            assert!(is_isomorphism(g, &game, &game).unwrap(), "{name}: {g}");
        }
    }
    let p = partition("example_5_6");
    let game = p
        .instantiate(&ParamAssignment::parse("α=1,β=2,γ=3,δ=4").unwrap())
        .unwrap();
    let g = &fixtures::generator_set("example_5_6").unwrap().generators()[0].clone();
    assert!(is_isomorphism(g, &game, &game).unwrap());
    assert!(classify(&game).fully());

    let top = partition("three_player/G_41");
    let constant = top
        .instantiate(&ParamAssignment::parse("alpha=5").unwrap())
        .unwrap();
    assert!(constant.payoffs().iter().all(|v| *v == Payoff::from(5)));
    let zero = CellPartition::coarsest(top.shape().clone())
        .instantiate(&ParamAssignment::parse("α=0").unwrap())
        .unwrap();
    assert!(zero.payoffs().iter().all(|v| *v == Payoff::zero()));
}

#[test]
fn family_order_and_dot() {
    let two: Vec<(String, CellPartition)> = fixtures::family("two_player")
        .unwrap()
        .into_iter()
        .map(|(n, s)| (n, s.partition()))
        .collect();
    let by = |n: &str| two.iter().find(|(m, _)| m == n).unwrap().1.clone();
    assert!(param_leq(&by("G_11"), &by("G_21")).unwrap());
    assert!(!param_leq(&by("G_21"), &by("G_22")).unwrap());
    assert!(!param_leq(&by("G_22"), &by("G_21")).unwrap());
    for (_, p) in &two {
        assert!(param_leq(p, p).unwrap());
    }

    let d = hasse(&two).unwrap();
    let dot = d.to_dot();
    assert_eq!(dot, hasse(&two).unwrap().to_dot());
    assert!(dot.starts_with("graph hasse {"));
    assert_eq!(dot.matches(" -- ").count(), 3);
    assert!(dot.contains("\"G_11\" -- \"G_21\";"));
    let top = d.nodes.iter().find(|n| n.label() == "G_31").unwrap();
    assert_eq!(top.height, 2);

    let single = hasse(&two[..1]).unwrap();
    assert_eq!((single.nodes.len(), single.edges.len()), (1, 0));

    // duplicates merge into one node named after both inputs
    let dup = vec![two[0].clone(), ("copy".to_string(), two[0].1.clone())];
    let merged = hasse(&dup).unwrap();
    assert_eq!(merged.nodes.len(), 1);
    assert_eq!(merged.nodes[0].label(), "G_11=copy");
}

#[test]
fn all_three_unions_agree() {
    let mut parts = vec![partition("three_player/G_32")];
    for (_, set) in fixtures::family("three_player_variants").unwrap() {
        parts.push(set.partition());
    }
    for (a, b) in parts.iter().tuple_combinations() {
        assert!(param_leq(a, b).unwrap() && param_leq(b, a).unwrap());
    }
}

#[test]
fn composition_on_the_relabelled_circle_game() {
    let game = fixtures::game("example_3_6_relabelled").unwrap();
    let s = game.shape_arc().clone();
    let parse = |t: &str| GameBijection::parse(t, s.clone(), s.clone()).unwrap();
    let g = parse("(1 2 3); 1:{a->d,b->c}; 2:{c->e,d->f}; 3:{e->b,f->a}");
    let h = parse("(1 2); 1:{a->c,b->d}; 2:{c->a,d->b}; 3:{e->f,f->e}");
    assert_eq!(
        h.compose(&g).unwrap().to_string(),
        "(2 3); 1:{a->b,b->a}; 2:{c->f,d->e}; 3:{e->d,f->c}"
    );
    assert_eq!(
        g.inverse().to_string(),
        "(1 3 2); 1:{a->f,b->e}; 2:{c->b,d->a}; 3:{e->c,f->d}"
    );
    let report = classify(&game);
    assert_eq!(report.class_name(), "only-transitive standard symmetric");
    assert_eq!(report.aut_order(), 3);
    assert!(are_isomorphic(
        &game,
        &fixtures::game("example_3_6").unwrap()
    ));
}

#[test]
fn label_dependent_and_independent_views_agree() {
    let shared = fixtures::game("example_3_6").unwrap();
    let (standard, group) = label_dep_standard_symmetric(&shared).unwrap();
    assert!(standard);
    assert_eq!(group, invariant_group(&shared).unwrap());
    assert!(is_standard_symmetric(&shared).unwrap().0);

    let relabelled = fixtures::game("example_3_6_relabelled").unwrap();
    assert_eq!(invariant_group(&relabelled), Err(Error::LabelMismatch));
    assert!(is_standard_symmetric(&relabelled).unwrap().0);
}

#[test]
fn matching_pennies_details() {
    let mp = fixtures::game("matching_pennies").unwrap();
    let aut = automorphism_group(&mp);
    let listed: BTreeSet<String> = aut.elements().iter().map(ToString::to_string).collect();
    assert_eq!(listed.len(), 4);
    assert!(listed.contains("(); 1:{H->T,T->H}; 2:{H->T,T->H}"));
    assert!(listed.contains("(1 2); 1:{H->H,T->T}; 2:{H->T,T->H}"));
    assert!(!is_strategy_trivial(&aut));
    assert_eq!(matching_from_group(&aut), Err(Error::NotStrategyTrivial));
    assert_eq!(is_fully_symmetric(&mp).unwrap(), (false, None));
}

#[test]
fn only_transitive_certificates() {
    let ex36 = fixtures::game("example_3_6").unwrap();
    let (profile, pi) = payoff_witness(&ex36).expect("3.6 has a witness");
    let n = ex36.players();
    let row: Vec<Payoff> = (0..n)
        .map(|i| ex36.payoff(i, &profile).unwrap().clone())
        .collect();
    let mut moved = row.clone();
    for (i, v) in row.into_iter().enumerate() {
        moved[pi.apply(i)] = v;
    }
    assert!((0..ex36.shape().profile_count()).all(|k| ex36.payoff_row(k) != moved.as_slice()));
    assert!(matches!(
        classify(&ex36).certificate(),
        Some(OnlyTransitiveCertificate::PayoffWitness { .. })
    ));

    // every rearrangement of every payoff vector occurs, so only the full
    // search can rule out the transpositions
    let shape = symgame_core::Shape::uniform(3, 2).unwrap();
    let closed = Game::from_integers(
        shape,
        &[
            &[1, 1, 1],
            &[3, 4, 5],
            &[4, 5, 3],
            &[4, 3, 5],
            &[5, 3, 4],
            &[5, 4, 3],
            &[3, 5, 4],
            &[2, 2, 2],
        ],
    )
    .unwrap();
    assert_eq!(payoff_witness(&closed), None);
    let report = classify(&closed);
    assert_eq!(report.class_name(), "only-transitive standard symmetric");
    assert_eq!(
        report.certificate(),
        Some(&OnlyTransitiveCertificate::Exhaustive)
    );
    assert!(classify(&fixtures::game("example_2_1").unwrap())
        .certificate()
        .is_none());
}

/// Condition (ii): some player-transitive strategy-trivial subgroup of Aut,
/// searched over subgroups with at most two generators.
fn has_transitive_trivial_subgroup(aut: &BijectionGroup) -> bool {
    let els = aut.elements();
    els.iter().cartesian_product(els).any(|(a, b)| {
        let g = BijectionGroup::closure(aut.shape().clone(), &[a.clone(), b.clone()]).unwrap();
        g.is_player_transitive() && is_strategy_trivial(&g)
    })
}

#[test]
fn subgroup_and_matching_formulations_agree() {
    let mut games: Vec<(String, Game)> = fixtures::game_names()
        .map(|n| (n.to_string(), fixtures::game(n).unwrap()))
        .collect();
    for fam in ["two_player", "three_player"] {
        for (n, set) in fixtures::family(fam).unwrap() {
            games.push((format!("{fam}/{n}"), set.partition().generic_game()));
        }
    }
    for name in ["example_5_9a", "example_5_9b", "example_5_10"] {
        games.push((
            name.into(),
            fixtures::generator_set(name)
                .unwrap()
                .partition()
                .generic_game(),
        ));
    }
    for (name, game) in games {
        if game.players() > 4 {
            continue;
        }
        let aut = automorphism_group(&game);
        let via_matchings = is_standard_symmetric(&game).unwrap().0;
        assert_eq!(
            has_transitive_trivial_subgroup(&aut),
            via_matchings,
            "{name}"
        );
        assert!(subgroup_proposition(&game).holds(), "{name}");
    }
}

#[test]
fn fixture_documents_round_trip() {
    for name in fixtures::game_names() {
        let game = fixtures::game(name).unwrap();
        let text = game_to_json(&game);
        let again = game_from_json(&text).unwrap();
        assert_eq!(again, game, "{name}");
        assert_eq!(game_to_json(&again), text, "{name}");
    }
    for name in fixtures::example_names() {
        let set = fixtures::generator_set(name).unwrap();
        let again = generators_from_json(&generators_to_json(&set)).unwrap();
        assert_eq!(again, set, "{name}");
    }
}
