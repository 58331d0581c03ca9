use lrc_core::combinatorics::{build_cover_t2, build_mesh};
use lrc_core::constructions::{construct_t2, construct_t3};
use lrc_core::formats::{read_cover, read_lrc, read_mesh, read_rg, write_cover, write_lrc, write_mesh, write_rg};
use lrc_core::graphs::{minimal_source_count, RepairGraph};
use proptest::prelude::*;

#[test]
fn constructed_codes_round_trip() {
    for c in [construct_t2(12, 3).unwrap(), construct_t3(16, 3).unwrap()] {
        let text = write_lrc(&c.code);
        let back = read_lrc(&text).unwrap();
        assert_eq!(back, c.code);
        assert_eq!(write_lrc(&back), text);
    }
    let head = write_lrc(&construct_t2(12, 3).unwrap().code);
    assert!(head.starts_with("n=20 k=12 r=3 t=2\n100000000000"));
}

#[test]
fn set_systems_round_trip() {
    for (k, r) in [(9, 3), (12, 3), (16, 3), (38, 5)] {
        let mesh = build_mesh(k, r).unwrap();
        let text = write_mesh(&mesh);
        assert_eq!(read_mesh(&text).unwrap(), mesh);
        assert_eq!(write_mesh(&read_mesh(&text).unwrap()), text);
    }
    for (k, r) in [(9, 3), (10, 3), (20, 4)] {
        let cover = build_cover_t2(k, r).unwrap();
        let text = write_cover(&cover, r);
        assert_eq!(read_cover(&text).unwrap(), (cover, r));
    }
}

#[test]
fn minimal_graph_round_trips() {
    let code = construct_t2(6, 2).unwrap().code;
    let g = minimal_source_count(&code, 2, u64::MAX).unwrap().graph;
    let text = write_rg(&g);
    assert_eq!(read_rg(&text).unwrap(), g);
}

#[test]
fn readers_report_line_numbers() {
    let err = read_mesh("k=3 r=2 m=2 l=2\nRL 1: 1 2 4\nRL 2: 9 3\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    let err = read_rg("n=3\nIN 2: 1\nIN 2: 1\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    assert!(read_cover("k=3 r=2 eta=1\nA 1: 1 2\nA 2: 3\n").is_err());
}

proptest! {
    #[test]
    fn random_dags_round_trip(n in 1usize..20, bits in proptest::collection::vec(any::<bool>(), 190)) {
        let mut in_sets = vec![Vec::new(); n];
        let mut b = bits.into_iter();
        for (v, set) in in_sets.iter_mut().enumerate() {
            for u in 0..v {
                if b.next().unwrap() {
                    set.push(u);
                }
            }
        }
        let g = RepairGraph::new(in_sets).unwrap();
        let text = write_rg(&g);
        prop_assert_eq!(read_rg(&text).unwrap(), g);
    }
}
