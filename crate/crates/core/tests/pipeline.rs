use flexcut::augment::exact_augment;
use flexcut::family_cover::SolverSlots;
use flexcut::fgc::{exact_fgc, is_flex_connected, iterative_cover, KecssMode};
use flexcut::harness::{augment_corpus, flex_corpus};
use flexcut::multigraph::io::Instance;
use flexcut::{near_min_cuts_cover, FlexInstance};

#[test]
fn text_and_json_round_trip_preserve_solutions() {
    for inst in flex_corpus(11, 12, false) {
        let file = Instance { graph: inst.graph.clone(), k: inst.k, q: inst.q };
        let back = Instance::parse(&file.to_text()).unwrap();
        assert_eq!(back.to_text(), file.to_text());
        assert_eq!(Instance::parse_json(&file.to_json()).unwrap().to_text(), file.to_text());
        let again = FlexInstance::new(back.graph, back.k, back.q).unwrap();
        assert_eq!(exact_fgc(&again).unwrap().cost, exact_fgc(&inst).unwrap().cost);
    }
}

#[test]
fn flex_solutions_are_feasible_and_bounded() {
    let slots = SolverSlots::default();
    for inst in flex_corpus(23, 24, false) {
        let sol = iterative_cover(&inst, &slots, KecssMode::Approx2).unwrap();
        assert!(is_flex_connected(&inst.subgraph(&sol.chosen), inst.k, inst.q).unwrap());
        let opt = exact_fgc(&inst).unwrap();
        assert!(opt.cost <= sol.cost);
        let g = sol.guarantee;
        assert!(i128::from(sol.cost) * i128::from(*g.denom()) <= i128::from(*g.numer()) * i128::from(opt.cost));
    }
}

#[test]
fn single_level_solver_choice_keeps_feasibility() {
    for inst in augment_corpus(5, 16) {
        let opt = exact_augment(&inst).unwrap().cost;
        for name in ["pd2", "exact"] {
            let slots = SolverSlots::default().with_single_level(name).unwrap();
            let sol = near_min_cuts_cover(&inst, &slots).unwrap();
            assert!(inst.is_feasible(&sol.chosen).unwrap());
            assert_eq!(sol.final_connectivity, inst.k);
            assert!(sol.cost >= opt);
        }
    }
}
