use std::panic;

use moodkit::omdl::DeclRef;
use moodkit::{
    parse, render, validate, AttributeDecl, ClassDecl, ClassModel, MethodDecl, ParseError, Span,
};
use moodkit_testkit::gen;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus(name: &str) -> String {
    let path = format!("{}/tests/corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn corpus_shapes() {
    let doc = parse(&corpus("shapes.omdl")).unwrap();
    let expected = ClassModel::new(vec![
        ClassDecl::new("Shape")
            .method(MethodDecl::visible("area"))
            .method(MethodDecl::hidden("cache"))
            .attribute(AttributeDecl::visible("name"))
            .attribute(AttributeDecl::hidden("id")),
        ClassDecl::new("Circle")
            .extends("Shape")
            .method(MethodDecl::visible("area").overriding("Shape", "area"))
            .attribute(AttributeDecl::hidden("radius"))
            .uses("Canvas"),
        ClassDecl::new("Square")
            .extends("Shape")
            .method(MethodDecl::visible("area").overriding("Shape", "area"))
            .method(MethodDecl::visible("side")),
        ClassDecl::new("Canvas"),
        ClassDecl::new("Renderer")
            .extends("Circle")
            .extends("Square")
            .method(MethodDecl::visible("draw"))
            .uses("Canvas")
            .uses("Shape")
            .uses("Canvas"),
    ]);
    assert_eq!(doc.model, expected);
    assert!(validate(&doc.model).is_empty());
    assert_eq!(
        doc.span_of(&DeclRef::Class("Circle".into())),
        Some(Span { line: 9, column: 7 })
    );
    assert_eq!(
        doc.span_of(&DeclRef::Method {
            class: "Renderer".into(),
            method: "draw".into()
        }),
        Some(Span {
            line: 23,
            column: 12
        })
    );
}

#[test]
fn corpus_compact() {
    let doc = parse(&corpus("compact.omdl")).unwrap();
    let expected = ClassModel::new(vec![
        ClassDecl::new("A")
            .method(MethodDecl::visible("f"))
            .attribute(AttributeDecl::visible("x")),
        ClassDecl::new("B")
            .extends("A")
            .method(MethodDecl::hidden("f").overriding("A", "f"))
            .uses("A"),
    ]);
    assert_eq!(doc.model, expected);
}

#[test]
fn corpus_comments_only() {
    let doc = parse(&corpus("empty.omdl")).unwrap();
    assert!(doc.model.is_empty());
    assert!(!validate(&doc.model).is_empty());
}

#[test]
fn corpus_mixed_whitespace() {
    let doc = parse(&corpus("whitespace.omdl")).unwrap();
    let expected = ClassModel::new(vec![
        ClassDecl::new("T").method(MethodDecl::hidden("m")),
        ClassDecl::new("U").extends("T").uses("T"),
    ]);
    assert_eq!(doc.model, expected);
}

#[test]
fn rejections_point_at_the_offending_token() {
    let cases: &[(&str, (usize, usize), &str)] = &[
        ("klass A {}", (1, 1), "`class` or end of input"),
        ("class {}", (1, 7), "identifier"),
        ("class A extends {}", (1, 17), "identifier"),
        ("class A extends B,", (1, 19), "identifier"),
        ("class A\n  method f;", (2, 3), "`{`"),
        ("class A { method f }", (1, 20), "`;`"),
        ("class A { method f overrides B; }", (1, 31), "`.`"),
        (
            "class A { hidden uses B; }",
            (1, 18),
            "`method` or `attribute`",
        ),
        ("class A { method class; }", (1, 18), "identifier"),
        ("class A { attribute 9x; }", (1, 21), "a token"),
        (
            "class A { method f;",
            (1, 20),
            "`method`, `attribute`, `uses`, a visibility or `}`",
        ),
    ];
    for (src, (line, column), expected) in cases {
        let err = parse(src).unwrap_err();
        assert_eq!(
            err.position,
            Span {
                line: *line,
                column: *column
            },
            "{src}"
        );
        assert_eq!(err.expected, *expected, "{src}");
    }
}

fn arbitrary_bytes(rng: &mut ChaCha8Rng) -> String {
    let len = rng.random_range(0..64);
    let bytes: Vec<u8> = (0..len).map(|_| rng.random()).collect();
    String::from_utf8_lossy(&bytes).into_owned()
}

const SOUP: &[&str] = &[
    "class",
    "extends",
    "method",
    "attribute",
    "uses",
    "overrides",
    "visible",
    "hidden",
    "{",
    "}",
    ";",
    ",",
    ".",
    "A",
    "B",
    "m",
    "x",
    "//",
    "\n",
    " ",
    "é",
    "0",
    "_",
    "/",
    "\t",
];

fn token_soup(rng: &mut ChaCha8Rng) -> String {
    let len = rng.random_range(0..40);
    (0..len)
        .map(|_| {
            let t = SOUP[rng.random_range(0..SOUP.len())];
            if rng.random_bool(0.7) {
                format!("{t} ")
            } else {
                t.to_owned()
            }
        })
        .collect()
}

fn parse_never_panics(src: &str) -> Result<(), String> {
    let outcome = panic::catch_unwind(|| parse(src));
    match outcome {
        Err(_) => Err(format!("panic on {src:?}")),
        Ok(Err(ParseError { position, .. })) if position.line == 0 || position.column == 0 => {
            Err(format!("zero position on {src:?}"))
        }
        Ok(Err(_)) => Ok(()),
        Ok(Ok(doc)) => {
            let again = parse(&render(&doc.model)).map_err(|e| format!("{e} on {src:?}"))?;
            if again.model == doc.model {
                Ok(())
            } else {
                Err(format!("unstable render for {src:?}"))
            }
        }
    }
}

#[test]
fn fuzz_bytes_and_token_soup() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut accepted = 0;
    for i in 0..10_000 {
        let src = if i % 2 == 0 {
            arbitrary_bytes(&mut rng)
        } else {
            token_soup(&mut rng)
        };
        parse_never_panics(&src).unwrap();
        accepted += usize::from(parse(&src).is_ok());
    }
    assert!(accepted > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let m = gen::random_model(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        let doc = parse(&render(&m)).unwrap();
        prop_assert_eq!(doc.model, m);
    }

    #[test]
    fn layout_and_comments_are_insignificant(seed in any::<u64>()) {
        let m = gen::random_model(&mut ChaCha8Rng::seed_from_u64(seed), 6);
        let mut rng = ChaCha8Rng::seed_from_u64(!seed);
        let text = render(&m);
        let mut noisy = String::new();
        for ch in text.chars() {
            if ch.is_whitespace() {
                match rng.random_range(0..4) {
                    0 => noisy.push_str(" // note {;}\n"),
                    1 => noisy.push_str("\t\r\n  "),
                    _ => noisy.push(ch),
                }
            } else {
                noisy.push(ch);
            }
        }
        prop_assert_eq!(parse(&noisy).unwrap().model, m);
    }

    #[test]
    fn arbitrary_strings_never_panic(src in ".{0,80}") {
        prop_assert_eq!(parse_never_panics(&src), Ok(()));
    }
}
