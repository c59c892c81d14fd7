use grafia_core::wiki::{default_tag_map, normalize_line, LineFilter, RemovalReason};
use grafia_core::{
    detect_orthography_tag, extract_pages, filter_lines, ingest, strip_markup, FilterConfig,
    IngestConfig, OrthographyClass,
};
use std::sync::OnceLock;

use proptest::prelude::*;

const MILAN: &str = include_str!("fixtures/milan.wikitext");
const MILAN_EXPECTED: &str = include_str!("fixtures/milan.expected");

#[test]
fn fixture_article_strips_to_expected_lines() {
    let got = strip_markup(MILAN);
    let want: Vec<&str> = MILAN_EXPECTED.lines().collect();
    assert_eq!(got, want);
    assert_eq!(detect_orthography_tag(MILAN, &default_tag_map()), OrthographyClass::Milclass);
}

#[test]
fn fixture_article_ingests_through_dump() {
    let escaped = MILAN.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
    let dump = format!(
        "<mediawiki><page><title>Milan</title><ns>0</ns><revision><text xml:space=\"preserve\">{escaped}</text></revision></page>\
         <page><title>Talk</title><ns>1</ns><revision><text>{{{{GrafMIL}}}} ignorad ignorad ignorad ignorad</text></revision></page></mediawiki>"
    );
    let out = ingest(dump.as_bytes(), &IngestConfig::default()).unwrap();
    assert_eq!(out.pages.articles, 1);
    assert_eq!(out.pages.tagged, 1);
    let texts: Vec<&str> = out.filtered.kept.iter().map(|s| s.text.as_str()).collect();
    let want: Vec<&str> = MILAN_EXPECTED.lines().collect();
    assert_eq!(texts, want);
    assert!(out.filtered.kept.iter().all(|s| s.tag == OrthographyClass::Milclass));
    assert!(out.filtered.report.is_consistent());
}

fn shared_filter() -> &'static LineFilter {
    static FILTER: OnceLock<LineFilter> = OnceLock::new();
    FILTER.get_or_init(|| LineFilter::new(FilterConfig::default()).unwrap())
}

#[test]
fn filter_lines_drops_by_reason() {
    let lines = [
        ("el gatt l'è negher e bianch", OrthographyClass::Locc),
        ("el gatt l'è negher e bianch", OrthographyClass::Locc),
        ("trop curt", OrthographyClass::Locc),
        ("Это строка на другом языке", OrthographyClass::Locc),
        ("the history of the city and its people", OrthographyClass::Locc),
        ("Brenna l'è un cumün de la provincia de Com", OrthographyClass::Locc),
        ("ona riga senza tag ma longa assee", OrthographyClass::NoTag),
    ];
    let (kept, report) = filter_lines(lines, &FilterConfig::default()).unwrap();
    assert_eq!(kept.len(), 1);
    for reason in RemovalReason::ALL {
        assert_eq!(report.removed.get(reason), 1, "{}", reason.as_str());
    }
}

fn wikitextish() -> impl Strategy<Value = String> {
    let atoms = prop::sample::select(vec![
        "{{", "}}", "[[", "]]", "|", "[", "]", "<", ">", "</", "/>", "<ref>", "</ref>", "<!--", "-->",
        "''", "'''", "==", "\n", "\n* ", "\n{|", "\n|}", "\n|-", "&amp;", "&#x41;", "File:", "it:",
        "lang", "nowrap", "el", "l'è", "cà", " ", "x",
    ]);
    prop::collection::vec(atoms, 0..60).prop_map(|v| v.concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn strip_markup_leaves_no_markup(src in wikitextish()) {
        for line in strip_markup(&src) {
            prop_assert!(!line.is_empty() && line == line.trim());
            prop_assert!(!line.contains('\n'));
            prop_assert!(!line.contains("{{") && !line.contains("[[") && !line.contains("</"), "{:?}", line);
        }
    }

    #[test]
    fn strip_markup_total_on_any_text(src in "\\PC{0,200}") {
        let _ = strip_markup(&src);
    }

    #[test]
    fn dump_reader_never_panics(bytes in prop::collection::vec(any::<u8>(), 0..300)) {
        for page in extract_pages(&bytes[..]).take(10) {
            let _ = page;
        }
    }

    #[test]
    fn tag_detection_ignores_case_and_spacing(
        class in prop::sample::select(OrthographyClass::TAGGABLE.to_vec()),
        upper in prop::collection::vec(any::<bool>(), 32),
        pad in "[ \\t]{0,3}",
        underscore in any::<bool>(),
    ) {
        let map = default_tag_map();
        let name = format!("Grafia {}", class.as_str());
        let name = if underscore { name.replace(' ', "_") } else { name };
        let cased: String = name
            .chars()
            .zip(upper.iter().cycle())
            .map(|(c, &u)| if u { c.to_ascii_uppercase() } else { c.to_ascii_lowercase() })
            .collect();
        let text = format!("intro {{{{{pad}{cased}{pad}}}}} rest");
        prop_assert_eq!(detect_orthography_tag(&text, &map), class);
    }

    #[test]
    fn filter_accounting_and_idempotence(
        lines in prop::collection::vec(("[a-zèö' ]{0,40}|the of and to in|Привет мир как дела", prop::sample::select(vec![OrthographyClass::Milclass, OrthographyClass::Locc, OrthographyClass::NoTag])), 0..40),
    ) {
        let filter = shared_filter();
        let out = filter.filter(lines.iter().map(|(t, c)| (t.as_str(), *c)));
        let r = &out.report;
        prop_assert!(r.is_consistent());
        prop_assert_eq!(r.input, lines.len());
        let untagged = lines.iter().filter(|(_, c)| *c == OrthographyClass::NoTag);
        prop_assert_eq!(r.removed.get(RemovalReason::NoTag), untagged.clone().count());
        prop_assert_eq!(out.untagged.len(), untagged.filter(|(t, _)| !t.trim().is_empty()).count());
        prop_assert_eq!(r.per_class.values().map(|c| c.kept).sum::<usize>(), r.kept);
        prop_assert_eq!(
            r.per_class.values().map(|c| c.input).sum::<usize>() + r.removed.get(RemovalReason::NoTag),
            r.input
        );
        for s in &out.kept {
            prop_assert_eq!(normalize_line(&s.text), s.text.clone());
            prop_assert!(filter.check(&s.text).is_none());
        }

        let again = filter.filter(out.kept.iter().map(|s| (s.text.as_str(), s.tag)));
        prop_assert_eq!(&again.kept, &out.kept);
        prop_assert_eq!(again.report.removed.total(), 0);
    }
}
