use monalg_cli::input::{parse_input, parse_json_input, InputDocument, Validation};
use proptest::prelude::*;

fn matrices() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(0i64..4, c), r).prop_filter("no zero row or column", move |m| {
            m.iter().all(|row| row.iter().any(|&x| x != 0)) && (0..c).all(|j| m.iter().any(|row| row[j] != 0))
        })
    })
}

proptest! {
    #[test]
    fn canonical_text_reparses(m in matrices()) {
        let doc = InputDocument::Matrix(m);
        let text = doc.to_text();
        let back = parse_input(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.digest(), doc.digest());
        let json = parse_json_input(&doc.to_json().to_string(), Validation::Strict).unwrap();
        prop_assert_eq!(json, doc);
    }

    #[test]
    fn row_separators_are_interchangeable(m in matrices()) {
        let rows: Vec<String> = m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
        let header = format!("matrix {} {}", m.len(), m[0].len());
        let slashed = format!("{header} / {}", rows.join(" / "));
        let lined = format!("# comment\n{header}\n{}\n", rows.join("\n"));
        prop_assert_eq!(parse_input(&slashed).unwrap(), parse_input(&lined).unwrap());
    }
}
