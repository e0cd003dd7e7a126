//! Removal of quoted and fenced material from comment bodies.
//!
//! Replies frequently quote earlier comments; the quoted text carries the
//! *previous* author's wording and would produce spurious matches, so it
//! is dropped before tokenization.

/// Controls what [`strip_quotes_with`] removes.
#[derive(Debug, Clone, Copy)]
pub struct StripOptions {
    /// Remove fenced code blocks (``` ... ```). Code bodies produce
    /// spurious lemma matches; disable to keep them.
    pub strip_fences: bool,
}

impl Default for StripOptions {
    fn default() -> StripOptions {
        StripOptions { strip_fences: true }
    }
}

/// Strips markdown quote lines (first non-space character `>`),
/// `<blockquote>...</blockquote>` spans, and fenced code blocks.
/// Everything else is preserved verbatim. An unclosed fence or blockquote
/// strips to the end of the body.
pub fn strip_quotes(body: &str) -> String {
    strip_quotes_with(body, StripOptions::default())
}

pub fn strip_quotes_with(body: &str, options: StripOptions) -> String {
    let without_blockquotes = remove_blockquote_spans(body);
    let mut out = String::with_capacity(without_blockquotes.len());
    let mut in_fence = false;
    for line in without_blockquotes.split_inclusive('\n') {
        let content = line.trim_start();
        if options.strip_fences && content.starts_with("```") {
            in_fence = !in_fence;
            continue;
        }
        if in_fence || content.starts_with('>') {
            continue;
        }
        out.push_str(line);
    }
    out
}

fn remove_blockquote_spans(body: &str) -> String {
    const OPEN: &str = "<blockquote";
    const CLOSE: &str = "</blockquote>";
    let lower = body.to_lowercase();
    let mut out = String::with_capacity(body.len());
    let mut pos = 0;
    while let Some(start) = lower[pos..].find(OPEN) {
        let start = pos + start;
        out.push_str(&body[pos..start]);
        match lower[start..].find(CLOSE) {
            Some(end) => pos = start + end + CLOSE.len(),
            None => return out, // unclosed: strip to end
        }
    }
    out.push_str(&body[pos..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_markdown_quote_lines() {
        let body = "> Have you tried safe mode?\nYes, same error.";
        assert_eq!(strip_quotes(body), "Yes, same error.");
    }

    #[test]
    fn no_quotes_is_identity() {
        let body = "Try install Bitcoin Core 0.17.\nIt works for me.";
        assert_eq!(strip_quotes(body), body);
    }

    #[test]
    fn removes_fenced_code() {
        let body = "```\ncode\n```\nTry install Bitcoin Core 0.17.";
        assert_eq!(strip_quotes(body), "Try install Bitcoin Core 0.17.");
    }

    #[test]
    fn unclosed_fence_strips_to_end() {
        let body = "Before.\n```\nrest is gone\nstill gone";
        assert_eq!(strip_quotes(body), "Before.\n");
    }

    #[test]
    fn fences_kept_when_disabled() {
        let body = "```\ncode here\n```\nAfter.";
        let kept = strip_quotes_with(
            body,
            StripOptions {
                strip_fences: false,
            },
        );
        assert_eq!(kept, body);
    }

    #[test]
    fn removes_blockquote_spans() {
        let body = "Intro <blockquote>quoted words</blockquote> outro.";
        assert_eq!(strip_quotes(body), "Intro  outro.");
        let multiline = "A\n<blockquote>\nq1\nq2\n</blockquote>\nB";
        assert_eq!(strip_quotes(multiline), "A\n\nB");
    }

    #[test]
    fn unclosed_blockquote_strips_to_end() {
        assert_eq!(strip_quotes("keep <blockquote>gone forever"), "keep ");
    }

    #[test]
    fn quote_marker_must_lead_the_line() {
        let body = "value > threshold is fine.";
        assert_eq!(strip_quotes(body), body);
    }

    #[test]
    fn survival_property_on_random_lines() {
        // any line not starting with `>` outside a fence survives verbatim
        let lines = ["plain text", " indented", "a > b", "1667", "", "*em*"];
        let body = lines.join("\n");
        let stripped = strip_quotes(&body);
        for line in lines {
            if !line.trim_start().starts_with('>') {
                assert!(stripped.lines().any(|l| l == line), "lost line {line:?}");
            }
        }
    }
}
