//! Sentence segmentation and tokenization.
//!
//! Sentences split on `?`, `!`, hard newlines, and on `.` when a space and
//! a capital letter (or end of text) follow, so version strings like
//! `0.17` and abbreviations survive. URLs are detected first and treated
//! atomically: no sentence break inside a URL and the whole URL becomes a
//! single token.

/// A raw token: its surface text and whether it is a URL.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawToken {
    pub surface: String,
    pub is_url: bool,
    pub is_punct: bool,
}

const ABBREVIATIONS: [&str; 6] = ["e.g.", "i.e.", "etc.", "vs.", "cf.", "resp."];

// Markdown syntax characters dropped before tokenization. `#` also covers
// issue references like `#1667`, leaving the numeric token.
fn is_markdown_char(c: char) -> bool {
    matches!(c, '*' | '`' | '~' | '#' | '\\' | '|')
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

// Characters that stay inside a token when sandwiched between two
// alphanumerics: keeps `0.17`, `x86-64`, `it's`, `and/or` intact.
fn is_sandwich_char(c: char) -> bool {
    matches!(c, '.' | '-' | '\'' | '\u{2019}' | '/' | '+')
}

/// Finds URL spans (`http://`, `https://`, `www.`) as byte ranges, with
/// trailing punctuation excluded.
pub fn find_url_spans(text: &str) -> Vec<(usize, usize)> {
    let bytes = text.as_bytes();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let rest = &text[i..];
        let started =
            rest.starts_with("http://") || rest.starts_with("https://") || rest.starts_with("www.");
        let at_boundary = i == 0
            || !text[..i]
                .chars()
                .next_back()
                .is_some_and(|c| c.is_alphanumeric());
        if started && at_boundary {
            let mut end = i;
            for (off, c) in rest.char_indices() {
                if c.is_whitespace() || matches!(c, '<' | '>' | '"') {
                    break;
                }
                end = i + off + c.len_utf8();
            }
            // trailing punctuation belongs to the sentence, not the URL
            while end > i {
                let last = text[i..end].chars().next_back().unwrap();
                if matches!(
                    last,
                    '.' | ',' | ';' | ':' | '!' | '?' | ')' | ']' | '}' | '\''
                ) {
                    end -= last.len_utf8();
                } else {
                    break;
                }
            }
            if end > i + 4 {
                spans.push((i, end));
                i = end;
                continue;
            }
        }
        i += text[i..].chars().next().map(char::len_utf8).unwrap_or(1);
    }
    spans
}

/// Splits text into sentences of raw tokens.
pub fn segment(text: &str) -> Vec<Vec<RawToken>> {
    let urls = find_url_spans(text);
    let mut sentences: Vec<Vec<RawToken>> = Vec::new();
    let mut tokens: Vec<RawToken> = Vec::new();
    let mut word = String::new();
    let mut punct = String::new();
    let mut since_space = String::new();

    let flush_word = |word: &mut String, tokens: &mut Vec<RawToken>| {
        let trimmed = word.trim_matches('_');
        if !trimmed.is_empty() {
            tokens.push(RawToken {
                surface: trimmed.to_string(),
                is_url: false,
                is_punct: false,
            });
        }
        word.clear();
    };
    let flush_punct = |punct: &mut String, tokens: &mut Vec<RawToken>| {
        if !punct.is_empty() {
            tokens.push(RawToken {
                surface: punct.clone(),
                is_url: false,
                is_punct: true,
            });
            punct.clear();
        }
    };

    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut url_idx = 0;
    let mut k = 0;
    while k < chars.len() {
        let (i, c) = chars[k];
        while url_idx < urls.len() && urls[url_idx].1 <= i {
            url_idx += 1;
        }
        if url_idx < urls.len() && urls[url_idx].0 == i {
            let (start, end) = urls[url_idx];
            flush_word(&mut word, &mut tokens);
            flush_punct(&mut punct, &mut tokens);
            tokens.push(RawToken {
                surface: text[start..end].to_string(),
                is_url: true,
                is_punct: false,
            });
            since_space.clear();
            while k < chars.len() && chars[k].0 < end {
                k += 1;
            }
            continue;
        }

        if c == '\n' {
            flush_word(&mut word, &mut tokens);
            flush_punct(&mut punct, &mut tokens);
            if !tokens.is_empty() {
                sentences.push(std::mem::take(&mut tokens));
            }
            since_space.clear();
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            flush_word(&mut word, &mut tokens);
            flush_punct(&mut punct, &mut tokens);
            since_space.clear();
            k += 1;
            continue;
        }
        since_space.push(c);
        if is_markdown_char(c) {
            flush_word(&mut word, &mut tokens);
            flush_punct(&mut punct, &mut tokens);
            k += 1;
            continue;
        }
        if is_word_char(c) {
            flush_punct(&mut punct, &mut tokens);
            word.push(c);
            k += 1;
            continue;
        }
        // sandwiched separator stays inside the word
        if is_sandwich_char(c) && !word.is_empty() {
            let prev_alnum = word.chars().next_back().is_some_and(char::is_alphanumeric);
            let next_alnum = chars.get(k + 1).is_some_and(|&(_, n)| n.is_alphanumeric());
            if prev_alnum && next_alnum {
                word.push(c);
                k += 1;
                continue;
            }
        }

        // punctuation; `?` and `!` always end the sentence, `.` only when
        // followed by whitespace + capital (or end) and not an abbreviation
        flush_word(&mut word, &mut tokens);
        punct.push(c);
        let ends_sentence = match c {
            '?' | '!' => true,
            '.' => {
                let abbrev = ABBREVIATIONS
                    .iter()
                    .any(|a| since_space.to_lowercase().ends_with(a));
                let mut j = k + 1;
                while j < chars.len() && chars[j].1 != '\n' && chars[j].1.is_whitespace() {
                    j += 1;
                }
                let at_end = j >= chars.len();
                let next_capital =
                    j > k + 1 && chars.get(j).is_some_and(|&(_, n)| n.is_uppercase());
                !abbrev && (at_end || next_capital)
            }
            _ => false,
        };
        if ends_sentence {
            flush_punct(&mut punct, &mut tokens);
            if !tokens.is_empty() {
                sentences.push(std::mem::take(&mut tokens));
            }
            since_space.clear();
        }
        k += 1;
    }
    flush_word(&mut word, &mut tokens);
    flush_punct(&mut punct, &mut tokens);
    if !tokens.is_empty() {
        sentences.push(tokens);
    }
    sentences
}
