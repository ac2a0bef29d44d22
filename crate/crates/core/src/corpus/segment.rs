//! Post-body segmentation into interleaved text and code blocks.

use super::{sentences::split_sentences, BlockPayload, CodeBlock, Container, ContentBlock};

const OPEN_TAG: &str = "<code>";
const CLOSE_TAG: &str = "</code>";

/// Split a post body on `<code>...</code>` delimiters.
///
/// Everything inside a code tag becomes a [`CodeBlock`] (verbatim, nested
/// markup preserved); everything outside becomes a text block with split
/// sentences. Whitespace-only segments are dropped. An unclosed `<code>` tag
/// turns the remainder of the body into code and produces a warning.
/// Returns the blocks plus any warnings.
pub fn segment_body(body: &str, post_id: u64) -> (Vec<ContentBlock>, Vec<String>) {
    let mut blocks = Vec::new();
    let mut warnings = Vec::new();
    let mut rest = body;

    loop {
        match rest.find(OPEN_TAG) {
            None => {
                push_text(&mut blocks, rest, post_id);
                break;
            }
            Some(open) => {
                push_text(&mut blocks, &rest[..open], post_id);
                let after_open = &rest[open + OPEN_TAG.len()..];
                match after_open.find(CLOSE_TAG) {
                    Some(close) => {
                        push_code(&mut blocks, &after_open[..close]);
                        rest = &after_open[close + CLOSE_TAG.len()..];
                    }
                    None => {
                        warnings.push(format!(
                            "post {post_id}: unclosed <code> tag; treating remainder as code"
                        ));
                        push_code(&mut blocks, after_open);
                        break;
                    }
                }
            }
        }
    }
    (blocks, warnings)
}

fn push_text(blocks: &mut Vec<ContentBlock>, raw: &str, post_id: u64) {
    if raw.trim().is_empty() {
        return;
    }
    let block_index = blocks.len();
    let sentences = split_sentences(
        raw,
        Container::Block {
            post_id,
            block_index,
        },
    );
    if sentences.is_empty() {
        return;
    }
    blocks.push(ContentBlock {
        index: block_index,
        payload: BlockPayload::Text {
            raw: raw.to_string(),
            sentences,
        },
    });
}

fn push_code(blocks: &mut Vec<ContentBlock>, raw: &str) {
    if raw.trim().is_empty() {
        return;
    }
    blocks.push(ContentBlock {
        index: blocks.len(),
        payload: BlockPayload::Code(CodeBlock::new(raw.to_string())),
    });
}
