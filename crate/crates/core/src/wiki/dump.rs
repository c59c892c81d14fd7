//! Streaming reader for MediaWiki `pages-articles` XML exports.

use std::io::BufRead;

use quick_xml::events::Event;
use quick_xml::Reader;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawPage {
    pub title: String,
    pub wikitext: String,
}

#[derive(Default)]
struct PageState {
    title: String,
    namespace: Option<String>,
    text: String,
    redirect: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    None,
    Title,
    Namespace,
    Text,
}

/// Iterator over article pages. Redirects and pages outside the main
/// namespace are skipped. After the first error the iterator is exhausted.
pub struct PageIter<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    done: bool,
}

pub fn extract_pages<R: BufRead>(dump: R) -> PageIter<R> {
    PageIter {
        reader: Reader::from_reader(dump),
        buf: Vec::new(),
        done: false,
    }
}

fn xml_error<R>(reader: &Reader<R>, message: impl Into<String>) -> Error {
    Error::Xml {
        offset: reader.buffer_position(),
        message: message.into(),
    }
}

impl<R: BufRead> PageIter<R> {
    fn next_page(&mut self) -> Result<Option<RawPage>> {
        let mut page: Option<PageState> = None;
        let mut field = Field::None;
        let mut depth = 0usize;
        loop {
            self.buf.clear();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(e) => e,
                Err(e) => return Err(xml_error(&self.reader, e.to_string())),
            };
            match event {
                Event::Start(e) => {
                    depth += 1;
                    match (e.local_name().as_ref(), page.is_some()) {
                        (b"page", false) => page = Some(PageState::default()),
                        (b"page", true) => return Err(xml_error(&self.reader, "nested <page> element")),
                        (b"title", true) => field = Field::Title,
                        (b"ns", true) => field = Field::Namespace,
                        (b"text", true) => field = Field::Text,
                        (b"redirect", true) => page.as_mut().unwrap().redirect = true,
                        _ => {}
                    }
                }
                Event::Empty(e) => {
                    if e.local_name().as_ref() == b"redirect" {
                        if let Some(p) = page.as_mut() {
                            p.redirect = true;
                        }
                    }
                }
                Event::Text(t) => {
                    if let Some(p) = page.as_mut() {
                        if field != Field::None {
                            let text = t
                                .unescape()
                                .map_err(|e| xml_error(&self.reader, e.to_string()))?;
                            push_field(p, field, &text);
                        }
                    }
                }
                Event::CData(t) => {
                    if let Some(p) = page.as_mut() {
                        if field != Field::None {
                            let text = String::from_utf8_lossy(&t);
                            push_field(p, field, &text);
                        }
                    }
                }
                Event::End(e) => {
                    depth = depth.saturating_sub(1);
                    match e.local_name().as_ref() {
                        b"title" | b"ns" | b"text" => field = Field::None,
                        b"page" => {
                            let p = page.take().expect("inside a page");
                            if let Some(raw) = finish(p) {
                                return Ok(Some(raw));
                            }
                        }
                        _ => {}
                    }
                }
                Event::Eof => {
                    if depth > 0 || page.is_some() {
                        return Err(xml_error(&self.reader, "unexpected end of stream inside an element"));
                    }
                    return Ok(None);
                }
                _ => {}
            }
        }
    }
}

fn push_field(page: &mut PageState, field: Field, text: &str) {
    match field {
        Field::Title => page.title.push_str(text),
        Field::Namespace => page.namespace.get_or_insert_with(String::new).push_str(text),
        Field::Text => page.text.push_str(text),
        Field::None => {}
    }
}

fn finish(page: PageState) -> Option<RawPage> {
    let title = page.title.trim().to_string();
    if title.is_empty() {
        log::warn!("skipping page without a title");
        return None;
    }
    let article = page.namespace.as_deref().is_none_or(|ns| ns.trim() == "0");
    let redirect = page.redirect || {
        let head = page.text.trim_start().as_bytes();
        head.get(..9).is_some_and(|h| h.eq_ignore_ascii_case(b"#redirect"))
    };
    (article && !redirect).then_some(RawPage {
        title,
        wikitext: page.text,
    })
}

impl<R: BufRead> Iterator for PageIter<R> {
    type Item = Result<RawPage>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_page() {
            Ok(Some(page)) => Some(Ok(page)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}
