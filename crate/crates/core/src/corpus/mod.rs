//! Thread/post/comment data model for developer-forum dumps.
//!
//! A corpus is a list of threads. Each thread has a question post, zero or
//! more answer posts and a title; posts carry interleaved text and code
//! blocks plus ordered comments. Prose is pre-split into sentences so that
//! downstream stages (mention detection, summarization, reactions) can refer
//! to a sentence by a stable address.

mod load;
pub mod segment;
pub mod sentences;

pub use load::{load_corpus, CorpusError, CorpusFormat, CorpusLoad};
pub use segment::segment_body;
pub use sentences::split_sentences;

use serde::{Deserialize, Serialize};

/// One forum thread: a question, its answers and the thread title.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thread {
    pub id: u64,
    pub title: String,
    pub tags: Vec<String>,
    pub question: Post,
    pub answers: Vec<Post>,
}

impl Thread {
    /// Sentences of the thread title, addressed with [`Container::Title`].
    pub fn title_sentences(&self) -> Vec<Sentence> {
        sentences::split_sentences(&self.title, Container::Title)
    }

    /// The question plus all answers, question first.
    pub fn posts(&self) -> impl Iterator<Item = &Post> {
        std::iter::once(&self.question).chain(self.answers.iter())
    }

    pub fn post(&self, post_id: u64) -> Option<&Post> {
        self.posts().find(|p| p.id == post_id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PostKind {
    Question,
    Answer,
}

/// A question or answer post with its segmented body and ordered comments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Post {
    pub id: u64,
    pub kind: PostKind,
    pub score: i64,
    pub blocks: Vec<ContentBlock>,
    pub comments: Vec<Comment>,
}

impl Post {
    /// All prose sentences of the post in reading order.
    pub fn text_sentences(&self) -> Vec<&Sentence> {
        self.blocks
            .iter()
            .filter_map(|b| match &b.payload {
                BlockPayload::Text { sentences, .. } => Some(sentences.iter()),
                BlockPayload::Code(_) => None,
            })
            .flatten()
            .collect()
    }

    /// Code blocks paired with their snippet index (0-based, code blocks only).
    pub fn code_blocks(&self) -> Vec<(usize, &ContentBlock, &CodeBlock)> {
        self.blocks
            .iter()
            .filter_map(|b| match &b.payload {
                BlockPayload::Code(code) => Some((b, code)),
                BlockPayload::Text { .. } => None,
            })
            .enumerate()
            .map(|(snippet_index, (block, code))| (snippet_index, block, code))
            .collect()
    }
}

/// A contiguous region of a post body: either prose or one code example.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentBlock {
    /// Position of the block within the post body (text and code combined).
    pub index: usize,
    pub payload: BlockPayload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockPayload {
    Text {
        raw: String,
        sentences: Vec<Sentence>,
    },
    Code(CodeBlock),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeBlock {
    pub raw: String,
    pub lines: Vec<String>,
}

impl CodeBlock {
    pub fn new(raw: String) -> Self {
        let lines = raw.lines().map(|l| l.to_string()).collect();
        CodeBlock { raw, lines }
    }
}

/// A comment on a post. `order` is the posting-time rank, 0 = earliest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comment {
    pub id: u64,
    pub order: u32,
    pub body: String,
    pub sentences: Vec<Sentence>,
}

/// Where a sentence lives: a text block of a post, a comment, or the title.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Container {
    Block { post_id: u64, block_index: usize },
    Comment { post_id: u64, comment_id: u64 },
    Title,
}

/// One prose sentence with its address inside the thread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub text: String,
    /// Dense 0-based index within the container.
    pub index: usize,
    pub container: Container,
}

impl Sentence {
    /// Stable identifier used in emitted artifacts and gold files.
    pub fn id(&self, thread_id: u64) -> String {
        sentence_id(thread_id, self.container, self.index)
    }
}

/// Canonical sentence identifier: the container address plus sentence index.
pub fn sentence_id(thread_id: u64, container: Container, index: usize) -> String {
    match container {
        Container::Block {
            post_id,
            block_index,
        } => format!("{thread_id}:{post_id}:b{block_index}:s{index}"),
        Container::Comment {
            post_id,
            comment_id,
        } => format!("{thread_id}:{post_id}:c{comment_id}:s{index}"),
        Container::Title => format!("{thread_id}:title:s{index}"),
    }
}

/// Identifier of a code snippet: thread, post and snippet index within the post.
pub fn snippet_id(thread_id: u64, post_id: u64, snippet_index: usize) -> String {
    format!("{thread_id}:{post_id}:{snippet_index}")
}
