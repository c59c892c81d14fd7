//! Wikitext to plain text. Covers the constructs that occur in article
//! bodies; anything unrecognised is dropped rather than guessed at.

use std::sync::OnceLock;

use regex::{Captures, Regex};

/// Templates whose arguments are rendered as running text.
const TEXT_TEMPLATES: &[(&str, TextArg)] = &[
    ("lang", TextArg::Last),
    ("nowrap", TextArg::First),
    ("nobr", TextArg::First),
    ("small", TextArg::First),
    ("big", TextArg::First),
    ("smallcaps", TextArg::First),
    ("sc", TextArg::First),
];

/// Elements removed together with their content.
const OPAQUE_ELEMENTS: &[&str] = &[
    "ref",
    "references",
    "math",
    "chem",
    "ce",
    "gallery",
    "timeline",
    "score",
    "syntaxhighlight",
    "source",
    "imagemap",
    "graph",
    "hiero",
    "mapframe",
    "maplink",
    "templatedata",
];

/// Link namespaces whose targets never render as text.
const HIDDEN_LINK_PREFIXES: &[&str] = &[
    "file",
    "image",
    "media",
    "category",
    "imagin",
    "immagine",
    "archivi",
    "categoria",
    "categorìa",
    "categuria",
];

#[derive(Clone, Copy)]
enum TextArg {
    First,
    Last,
}

struct Patterns {
    comment: Regex,
    opaque: Vec<(Regex, Regex)>,
    external: Regex,
    tag: Regex,
    quotes: Regex,
    magic: Regex,
    entity: Regex,
    language_code: Regex,
}

fn patterns() -> &'static Patterns {
    static CELL: OnceLock<Patterns> = OnceLock::new();
    CELL.get_or_init(|| Patterns {
        comment: Regex::new(r"(?s)<!--.*?(?:-->|\z)").unwrap(),
        opaque: OPAQUE_ELEMENTS
            .iter()
            .map(|name| {
                (
                    Regex::new(&format!(r"(?i)<{name}\b[^<>]*/>")).unwrap(),
                    Regex::new(&format!(r"(?is)<{name}\b[^<>]*>.*?</{name}\s*>")).unwrap(),
                )
            })
            .collect(),
        external: Regex::new(r"\[(?:https?:|ftp:|mailto:|//)[^\s\]]*(?:[ \t]+([^\]\n]*))?\]")
            .unwrap(),
        tag: Regex::new(r"</?[A-Za-z][A-Za-z0-9]*(?:\s[^<>]*)?/?>").unwrap(),
        quotes: Regex::new(r"'{2,}").unwrap(),
        magic: Regex::new(r"__[A-Z]+__").unwrap(),
        entity: Regex::new(r"&(#[0-9]{1,7}|#[xX][0-9a-fA-F]{1,6}|[A-Za-z]{2,8});").unwrap(),
        language_code: Regex::new(r"^[a-z]{2,3}(?:-[a-z]{2,8})*$").unwrap(),
    })
}

/// Converts an article's wikitext into trimmed, non-empty plain-text lines.
pub fn strip_markup(wikitext: &str) -> Vec<String> {
    let p = patterns();
    let mut text = p.comment.replace_all(wikitext, "").into_owned();
    for (empty, full) in &p.opaque {
        text = empty.replace_all(&text, "").into_owned();
        text = full.replace_all(&text, "").into_owned();
    }
    let text = strip_templates(&text);
    let text = strip_tables(&text);
    let text = strip_links(&text);
    let text = p.external.replace_all(&text, |c: &Captures| {
        c.get(1).map_or(String::new(), |m| m.as_str().to_string())
    });
    let text = p.tag.replace_all(&text, "");
    let text = p.quotes.replace_all(&text, "");
    let text = p.magic.replace_all(&text, "");
    let text = decode_entities(&text);

    text.lines().filter_map(clean_line).collect()
}

fn clean_line(line: &str) -> Option<String> {
    let line = line.trim();
    if line.len() >= 2 && line.starts_with('=') && line.ends_with('=') {
        return None;
    }
    if line.starts_with('|') || line.starts_with('!') || line.starts_with("{|") || line.starts_with("----") {
        return None;
    }
    let line = line.trim_start_matches(['*', '#', ':', ';']);
    let out = line.split_whitespace().collect::<Vec<_>>().join(" ");
    if out.is_empty() || out.contains("{{") || out.contains("[[") || out.contains("</") {
        return None;
    }
    Some(out)
}

/// Byte offset just past the delimiter closing the construct opened at
/// `start`, honouring nesting of the same delimiter pair.
fn find_close(text: &str, start: usize, open: &str, close: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    let mut depth = 0usize;
    let mut i = start;
    while i < bytes.len() {
        if bytes[i..].starts_with(open.as_bytes()) {
            depth += 1;
            i += open.len();
        } else if bytes[i..].starts_with(close.as_bytes()) {
            depth -= 1;
            i += close.len();
            if depth == 0 {
                return Some(i);
            }
        } else {
            i += 1;
        }
    }
    None
}

fn line_end(text: &str, from: usize) -> usize {
    text[from..].find('\n').map_or(text.len(), |k| from + k)
}

/// Splits on `|` outside nested templates and links.
fn split_args(inner: &str) -> Vec<&str> {
    let bytes = inner.as_bytes();
    let mut parts = Vec::new();
    let (mut braces, mut brackets) = (0i32, 0i32);
    let mut last = 0;
    let mut i = 0;
    while i < bytes.len() {
        match &bytes[i..] {
            [b'{', b'{', ..] => {
                braces += 1;
                i += 2;
                continue;
            }
            [b'}', b'}', ..] => {
                braces -= 1;
                i += 2;
                continue;
            }
            [b'[', b'[', ..] => {
                brackets += 1;
                i += 2;
                continue;
            }
            [b']', b']', ..] => {
                brackets -= 1;
                i += 2;
                continue;
            }
            [b'|', ..] if braces == 0 && brackets == 0 => {
                parts.push(&inner[last..i]);
                last = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push(&inner[last..]);
    parts
}

fn strip_templates(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pos = 0;
    while let Some(k) = text[pos..].find("{{") {
        let start = pos + k;
        out.push_str(&text[pos..start]);
        match find_close(text, start, "{{", "}}") {
            Some(end) => {
                out.push_str(&render_template(&text[start + 2..end - 2]));
                pos = end;
            }
            None => pos = line_end(text, start),
        }
    }
    out.push_str(&text[pos..]);
    out
}

fn render_template(inner: &str) -> String {
    let args = split_args(inner);
    let name = args[0].trim().to_lowercase();
    let rule = TEXT_TEMPLATES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, rule)| rule)
        .or_else(|| name.starts_with("lang-").then_some(TextArg::First));
    let positional: Vec<&str> = args[1..].iter().copied().filter(|a| !a.contains('=')).collect();
    let chosen = match rule {
        Some(TextArg::First) => positional.first(),
        Some(TextArg::Last) => positional.last(),
        None => None,
    };
    chosen.map_or(String::new(), |a| strip_templates(a))
}

fn strip_tables(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut depth = 0usize;
    for line in text.split_inclusive('\n') {
        let t = line.trim_start();
        if t.starts_with("{|") {
            depth += 1;
        } else if depth > 0 && t.starts_with("|}") {
            depth -= 1;
        } else if depth == 0 {
            out.push_str(line);
        }
    }
    out
}

fn strip_links(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pos = 0;
    while let Some(k) = text[pos..].find("[[") {
        let start = pos + k;
        out.push_str(&text[pos..start]);
        match find_close(text, start, "[[", "]]") {
            Some(end) => {
                out.push_str(&render_link(&text[start + 2..end - 2]));
                pos = end;
            }
            None => pos = line_end(text, start),
        }
    }
    out.push_str(&text[pos..]);
    out
}

fn render_link(inner: &str) -> String {
    let (colon_link, inner) = match inner.strip_prefix(':') {
        Some(rest) => (true, rest),
        None => (false, inner),
    };
    let args = split_args(inner);
    let target = args[0].trim();
    if !colon_link {
        if let Some((prefix, _)) = target.split_once(':') {
            let prefix = prefix.trim();
            let lower = prefix.to_lowercase();
            if HIDDEN_LINK_PREFIXES.contains(&lower.as_str())
                || patterns().language_code.is_match(prefix)
            {
                return String::new();
            }
        }
    }
    match args.get(1..) {
        Some(rest) if !rest.is_empty() && !rest.join("|").trim().is_empty() => {
            strip_links(&rest.join("|"))
        }
        _ => target.to_string(),
    }
}

fn decode_entities(text: &str) -> String {
    patterns()
        .entity
        .replace_all(text, |c: &Captures| {
            let body = &c[1];
            let decoded = if let Some(num) = body.strip_prefix('#') {
                let code = match num.strip_prefix(['x', 'X']) {
                    Some(hex) => u32::from_str_radix(hex, 16).ok(),
                    None => num.parse().ok(),
                };
                code.and_then(char::from_u32).map(String::from)
            } else {
                named_entity(body).map(String::from)
            };
            decoded.unwrap_or_else(|| c[0].to_string())
        })
        .into_owned()
}

fn named_entity(name: &str) -> Option<&'static str> {
    Some(match name {
        "nbsp" | "ensp" | "emsp" | "thinsp" => " ",
        "amp" => "&",
        "lt" => "<",
        "gt" => ">",
        "quot" => "\"",
        "apos" => "'",
        "shy" | "zwj" | "zwnj" | "lrm" | "rlm" => "",
        "ndash" => "\u{2013}",
        "mdash" => "\u{2014}",
        "hellip" => "\u{2026}",
        "laquo" => "\u{ab}",
        "raquo" => "\u{bb}",
        "middot" => "\u{b7}",
        "deg" => "\u{b0}",
        "times" => "\u{d7}",
        "euro" => "\u{20ac}",
        "copy" => "\u{a9}",
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn link_label_kept() {
        assert_eq!(strip_markup("[[Milan|Milàn]] l'è 'na citaa."), vec!["Milàn l'è 'na citaa."]);
        assert_eq!(strip_markup("A [[Bergum]]asch"), vec!["A Bergumasch"]);
    }

    #[test]
    fn headings_dropped() {
        assert!(strip_markup("== Storia ==").is_empty());
    }

    #[test]
    fn tag_template_removed() {
        assert_eq!(strip_markup("{{GrafMIL}}Text here"), vec!["Text here"]);
    }

    #[test]
    fn nested_templates_and_text_bearing() {
        let src = "{{Infobox|nom={{lang|it|Milano}}|pop=1}}\nEl nomm {{lang|it|Milano}} e {{nowrap|do paròll}}.";
        assert_eq!(strip_markup(src), vec!["El nomm Milano e do paròll."]);
    }

    #[test]
    fn refs_comments_tags_and_quotes() {
        let src = "'''Milan''' <!-- nota -->l'è<ref name=\"a\">{{cita|x}}</ref> <b>granda</b><ref name=b/>.";
        assert_eq!(strip_markup(src), vec!["Milan l'è granda."]);
    }

    #[test]
    fn files_categories_interwiki_and_tables() {
        let src = "[[File:Milan.jpg|thumb|Ona [[foto]]]]\nTest\n{| class=\"wikitable\"\n|-\n| cella || x\n|}\n[[Categoria:Cittaa]]\n[[it:Milano]]";
        assert_eq!(strip_markup(src), vec!["Test"]);
    }

    #[test]
    fn external_links_lists_entities() {
        let src = "* Vedè [http://example.org el sit] e [https://x.y] &amp; &#233;&nbsp;fin";
        assert_eq!(strip_markup(src), vec!["Vedè el sit e & é fin"]);
    }

    #[test]
    fn unterminated_constructs_do_not_swallow_text() {
        let src = "Prima {{rott|x\nDopo [[link\nUltima";
        assert_eq!(strip_markup(src), vec!["Prima", "Dopo", "Ultima"]);
    }

    #[test]
    fn output_never_contains_markup_openers() {
        for src in ["&lt;/b&gt; testo", "{{{{", "[[[[x]]", "a</b", "x {{ y"] {
            for line in strip_markup(src) {
                assert!(!line.contains("{{") && !line.contains("[[") && !line.contains("</"), "{line}");
            }
        }
    }
}
