//! Corpus loading: canonical JSONL fixtures plus a small importer for the
//! Stack Exchange Posts/Comments XML dump subset.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use once_cell::sync::Lazy;
use regex::Regex;
use serde::Deserialize;

use super::{segment::segment_body, sentences::split_sentences, Comment, Container, Post,
            PostKind, Thread};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read corpus file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("xml-dump corpus path {0} must be a directory containing Posts.xml")]
    NotADumpDirectory(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    XmlDump,
}

/// Loaded corpus plus per-record diagnostics. Records that fail to parse are
/// skipped, counted and reported; only an unreadable input is fatal.
#[derive(Debug)]
pub struct CorpusLoad {
    pub threads: Vec<Thread>,
    pub diagnostics: Vec<String>,
    pub skipped_records: usize,
}

/// Load a corpus from `path`. For [`CorpusFormat::Jsonl`] the path is one
/// JSONL file (one thread per line). For [`CorpusFormat::XmlDump`] the path
/// is a directory holding `Posts.xml` and optionally `Comments.xml`.
/// Threads are returned sorted ascending by id.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<CorpusLoad, CorpusError> {
    let mut load = match format {
        CorpusFormat::Jsonl => load_jsonl(path)?,
        CorpusFormat::XmlDump => load_xml_dump(path)?,
    };
    load.threads.sort_by_key(|t| t.id);
    Ok(load)
}

// ---------------------------------------------------------------------------
// JSONL
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
struct RawThread {
    id: u64,
    title: String,
    #[serde(default)]
    tags: Vec<String>,
    question: RawPost,
    #[serde(default)]
    answers: Vec<RawPost>,
}

#[derive(Debug, Deserialize)]
struct RawPost {
    id: u64,
    #[serde(default)]
    score: i64,
    body: String,
    #[serde(default)]
    comments: Vec<RawComment>,
}

#[derive(Debug, Deserialize)]
struct RawComment {
    id: u64,
    #[serde(default)]
    order: Option<u32>,
    body: String,
}

fn load_jsonl(path: &Path) -> Result<CorpusLoad, CorpusError> {
    let contents = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut threads = Vec::new();
    let mut diagnostics = Vec::new();
    let mut skipped = 0usize;
    let mut seen_ids = BTreeSet::new();

    for (lineno, line) in contents.lines().enumerate() {
        let lineno = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawThread = match serde_json::from_str(line) {
            Ok(raw) => raw,
            Err(err) => {
                diagnostics.push(format!("line {lineno}: skipped record: {err}"));
                skipped += 1;
                continue;
            }
        };
        if !seen_ids.insert(raw.id) {
            diagnostics.push(format!(
                "line {lineno}: skipped record: duplicate thread id {}",
                raw.id
            ));
            skipped += 1;
            continue;
        }
        threads.push(build_thread(raw, &mut diagnostics));
    }

    Ok(CorpusLoad {
        threads,
        diagnostics,
        skipped_records: skipped,
    })
}

fn build_thread(raw: RawThread, diagnostics: &mut Vec<String>) -> Thread {
    let question = build_post(raw.question, PostKind::Question, diagnostics);
    let mut seen_posts: BTreeSet<u64> = [question.id].into_iter().collect();
    let mut answers = Vec::new();
    for answer in raw.answers {
        if !seen_posts.insert(answer.id) {
            diagnostics.push(format!(
                "thread {}: skipped duplicate post id {}",
                raw.id, answer.id
            ));
            continue;
        }
        answers.push(build_post(answer, PostKind::Answer, diagnostics));
    }
    Thread {
        id: raw.id,
        title: raw.title,
        tags: raw.tags,
        question,
        answers,
    }
}

fn build_post(raw: RawPost, kind: PostKind, diagnostics: &mut Vec<String>) -> Post {
    let (blocks, warnings) = segment_body(&raw.body, raw.id);
    diagnostics.extend(warnings);
    Post {
        id: raw.id,
        kind,
        score: raw.score,
        blocks,
        comments: order_comments(raw.id, raw.comments),
    }
}

/// Order comments by their explicit `order` field when every comment has
/// one, otherwise by input position, then re-rank densely from 0.
fn order_comments(post_id: u64, raw: Vec<RawComment>) -> Vec<Comment> {
    let mut indexed: Vec<(usize, RawComment)> = raw.into_iter().enumerate().collect();
    if indexed.iter().all(|(_, c)| c.order.is_some()) {
        indexed.sort_by_key(|(idx, c)| (c.order.unwrap(), *idx));
    }
    indexed
        .into_iter()
        .enumerate()
        .map(|(rank, (_, c))| {
            let sentences = split_sentences(
                &c.body,
                Container::Comment {
                    post_id,
                    comment_id: c.id,
                },
            );
            Comment {
                id: c.id,
                order: rank as u32,
                body: c.body,
                sentences,
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Stack Exchange XML dump subset
// ---------------------------------------------------------------------------

static ATTR_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r#"(\w+)="([^"]*)""#).unwrap());
static PRE_CODE_OPEN_RE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"<pre[^>]*>\s*<code[^>]*>").unwrap());
static PRE_CODE_CLOSE_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"</code>\s*</pre>").unwrap());
static TAG_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"</?[A-Za-z][^>]*>").unwrap());
static TAG_LIST_RE: Lazy<Regex> = Lazy::new(|| Regex::new(r"<([^<>]+)>").unwrap());

fn load_xml_dump(dir: &Path) -> Result<CorpusLoad, CorpusError> {
    if !dir.is_dir() {
        return Err(CorpusError::NotADumpDirectory(dir.to_path_buf()));
    }
    let posts_path = dir.join("Posts.xml");
    let posts_xml = fs::read_to_string(&posts_path).map_err(|source| CorpusError::Io {
        path: posts_path.clone(),
        source,
    })?;

    let mut diagnostics = Vec::new();
    let mut skipped = 0usize;

    // First pass: questions become threads, keyed by the question post id.
    let mut raw_threads: Vec<RawThread> = Vec::new();
    let mut answers: Vec<(u64, RawPost)> = Vec::new();
    for row in xml_rows(&posts_xml) {
        let Some(id) = row_attr_u64(&row, "Id") else {
            diagnostics.push("Posts.xml: skipped row without numeric Id".to_string());
            skipped += 1;
            continue;
        };
        let type_id = attr(&row, "PostTypeId").unwrap_or_default();
        let body = html_body_to_plain(&attr(&row, "Body").unwrap_or_default());
        let score = attr(&row, "Score")
            .and_then(|s| s.parse().ok())
            .unwrap_or(0);
        match type_id.as_str() {
            "1" => {
                let Some(title) = attr(&row, "Title") else {
                    diagnostics.push(format!("Posts.xml: skipped question {id} without Title"));
                    skipped += 1;
                    continue;
                };
                raw_threads.push(RawThread {
                    id,
                    title,
                    tags: parse_tag_list(&attr(&row, "Tags").unwrap_or_default()),
                    question: RawPost {
                        id,
                        score,
                        body,
                        comments: vec![],
                    },
                    answers: vec![],
                });
            }
            "2" => {
                let Some(parent) = row_attr_u64(&row, "ParentId") else {
                    diagnostics.push(format!("Posts.xml: skipped answer {id} without ParentId"));
                    skipped += 1;
                    continue;
                };
                answers.push((
                    parent,
                    RawPost {
                        id,
                        score,
                        body,
                        comments: vec![],
                    },
                ));
            }
            _ => {} // wiki/tag rows and friends are outside the subset
        }
    }

    answers.sort_by_key(|(_, p)| p.id);
    for (parent, post) in answers {
        match raw_threads.iter_mut().find(|t| t.id == parent) {
            Some(thread) => thread.answers.push(post),
            None => {
                diagnostics.push(format!(
                    "Posts.xml: skipped answer {} with unknown parent {parent}",
                    post.id
                ));
                skipped += 1;
            }
        }
    }

    attach_dump_comments(dir, &mut raw_threads, &mut diagnostics, &mut skipped)?;

    let threads = raw_threads
        .into_iter()
        .map(|raw| build_thread(raw, &mut diagnostics))
        .collect();
    Ok(CorpusLoad {
        threads,
        diagnostics,
        skipped_records: skipped,
    })
}

fn attach_dump_comments(
    dir: &Path,
    threads: &mut [RawThread],
    diagnostics: &mut Vec<String>,
    skipped: &mut usize,
) -> Result<(), CorpusError> {
    let comments_path = dir.join("Comments.xml");
    if !comments_path.exists() {
        return Ok(());
    }
    let xml = fs::read_to_string(&comments_path).map_err(|source| CorpusError::Io {
        path: comments_path.clone(),
        source,
    })?;
    // (post id, creation date, comment id, text) — creation date orders them.
    let mut rows: Vec<(u64, String, u64, String)> = Vec::new();
    for row in xml_rows(&xml) {
        let (Some(id), Some(post_id)) = (row_attr_u64(&row, "Id"), row_attr_u64(&row, "PostId"))
        else {
            diagnostics.push("Comments.xml: skipped row without Id/PostId".to_string());
            *skipped += 1;
            continue;
        };
        let created = attr(&row, "CreationDate").unwrap_or_default();
        let text = attr(&row, "Text").unwrap_or_default();
        rows.push((post_id, created, id, text));
    }
    rows.sort_by(|a, b| (a.0, &a.1, a.2).cmp(&(b.0, &b.1, b.2)));
    for (post_id, _, id, text) in rows {
        let post = threads.iter_mut().find_map(|t| {
            if t.question.id == post_id {
                Some(&mut t.question)
            } else {
                t.answers.iter_mut().find(|a| a.id == post_id)
            }
        });
        match post {
            Some(post) => post.comments.push(RawComment {
                id,
                order: Some(post.comments.len() as u32),
                body: text,
            }),
            None => {
                diagnostics.push(format!(
                    "Comments.xml: skipped comment {id} on unknown post {post_id}"
                ));
                *skipped += 1;
            }
        }
    }
    Ok(())
}

/// Attribute blobs of every `<row ... />` element in the file.
fn xml_rows(xml: &str) -> Vec<String> {
    xml.split("<row")
        .skip(1)
        .filter_map(|chunk| chunk.split("/>").next().map(|s| s.to_string()))
        .collect()
}

fn attr(row: &str, name: &str) -> Option<String> {
    ATTR_RE
        .captures_iter(row)
        .find(|c| &c[1] == name)
        .map(|c| unescape_xml(&c[2]))
}

fn row_attr_u64(row: &str, name: &str) -> Option<u64> {
    attr(row, name).and_then(|v| v.parse().ok())
}

/// Reduce a Stack Exchange HTML body to the plain-text form the rest of the
/// pipeline expects: `<pre><code>` fences become bare `<code>` delimiters,
/// inline markup is stripped, entities are decoded.
fn html_body_to_plain(body: &str) -> String {
    let marked = PRE_CODE_OPEN_RE.replace_all(body, "\u{1}");
    let marked = PRE_CODE_CLOSE_RE.replace_all(&marked, "\u{2}");
    let stripped = TAG_RE.replace_all(&marked, "");
    let decoded = unescape_xml(&stripped);
    decoded.replace('\u{1}', "<code>").replace('\u{2}', "</code>")
}

fn parse_tag_list(raw: &str) -> Vec<String> {
    TAG_LIST_RE
        .captures_iter(raw)
        .map(|c| c[1].to_string())
        .collect()
}

fn unescape_xml(text: &str) -> String {
    text.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&#39;", "'")
        .replace("&apos;", "'")
        .replace("&#xA;", "\n")
        .replace("&#xD;", "\r")
        .replace("&nbsp;", " ")
        .replace("&amp;", "&")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
        let path = dir.join(name);
        let mut f = fs::File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path
    }

    const GOOD_LINE: &str = r#"{"id":10,"title":"How to parse JSON?","tags":["java"],"question":{"id":11,"score":3,"body":"I need help. <code>Gson g = new Gson();</code>","comments":[{"id":100,"order":0,"body":"Same problem here."}]},"answers":[{"id":12,"score":5,"body":"Use this. <code>g.toJson(x);</code>","comments":[]}]}"#;

    #[test]
    fn loads_jsonl_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(dir.path(), "corpus.jsonl", &format!("{GOOD_LINE}\n"));
        let load = load_corpus(&path, CorpusFormat::Jsonl).unwrap();
        assert_eq!(load.skipped_records, 0);
        assert_eq!(load.threads.len(), 1);
        let t = &load.threads[0];
        assert_eq!(t.id, 10);
        assert_eq!(t.question.kind, PostKind::Question);
        assert_eq!(t.question.blocks.len(), 2);
        assert_eq!(t.question.comments.len(), 1);
        assert_eq!(t.answers[0].kind, PostKind::Answer);
        assert_eq!(t.answers[0].score, 5);
    }

    #[test]
    fn malformed_line_is_skipped_and_counted() {
        let dir = tempfile::tempdir().unwrap();
        let two = format!("{GOOD_LINE}\n{{\"title\": \"missing id\"}}\n");
        let path = write_file(dir.path(), "corpus.jsonl", &two);
        let load = load_corpus(&path, CorpusFormat::Jsonl).unwrap();
        assert_eq!(load.threads.len(), 1);
        assert_eq!(load.skipped_records, 1);
        assert!(
            load.diagnostics.iter().any(|d| d.starts_with("line 2:")),
            "diagnostics: {:?}",
            load.diagnostics
        );
    }

    #[test]
    fn duplicate_thread_ids_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let two = format!("{GOOD_LINE}\n{GOOD_LINE}\n");
        let path = write_file(dir.path(), "corpus.jsonl", &two);
        let load = load_corpus(&path, CorpusFormat::Jsonl).unwrap();
        assert_eq!(load.threads.len(), 1);
        assert_eq!(load.skipped_records, 1);
    }

    #[test]
    fn threads_are_sorted_by_id() {
        let dir = tempfile::tempdir().unwrap();
        let a = GOOD_LINE.replacen("\"id\":10", "\"id\":30", 1);
        let b = GOOD_LINE.replacen("\"id\":10", "\"id\":20", 1);
        let path = write_file(dir.path(), "corpus.jsonl", &format!("{a}\n{b}\n"));
        let load = load_corpus(&path, CorpusFormat::Jsonl).unwrap();
        let ids: Vec<u64> = load.threads.iter().map(|t| t.id).collect();
        assert_eq!(ids, vec![20, 30]);
    }

    #[test]
    fn unreadable_file_is_fatal() {
        let err = load_corpus(Path::new("/nonexistent/corpus.jsonl"), CorpusFormat::Jsonl)
            .unwrap_err();
        assert!(matches!(err, CorpusError::Io { .. }));
    }

    #[test]
    fn xml_dump_subset_imports_threads() {
        let dir = tempfile::tempdir().unwrap();
        write_file(
            dir.path(),
            "Posts.xml",
            r#"<?xml version="1.0"?>
<posts>
  <row Id="1" PostTypeId="1" Score="4" Title="Convert string to JSON?" Tags="&lt;java&gt;&lt;json&gt;" Body="&lt;p&gt;I am stuck.&lt;/p&gt;&lt;pre&gt;&lt;code&gt;String s = &amp;quot;x&amp;quot;;&lt;/code&gt;&lt;/pre&gt;" />
  <row Id="2" PostTypeId="2" ParentId="1" Score="7" Body="&lt;p&gt;Try &lt;code&gt;Gson&lt;/code&gt; instead.&lt;/p&gt;" />
  <row Id="9" PostTypeId="2" ParentId="999" Score="0" Body="orphan" />
</posts>"#,
        );
        write_file(
            dir.path(),
            "Comments.xml",
            r#"<comments>
  <row Id="50" PostId="2" CreationDate="2014-01-02T00:00:00" Text="Later comment." />
  <row Id="51" PostId="2" CreationDate="2014-01-01T00:00:00" Text="Earlier comment." />
</comments>"#,
        );
        let load = load_corpus(dir.path(), CorpusFormat::XmlDump).unwrap();
        assert_eq!(load.threads.len(), 1);
        let t = &load.threads[0];
        assert_eq!(t.id, 1);
        assert_eq!(t.tags, vec!["java", "json"]);
        // The question body keeps its pre/code fence as a code block.
        assert_eq!(t.question.blocks.len(), 2);
        match &t.question.blocks[1].payload {
            super::super::BlockPayload::Code(code) => {
                assert_eq!(code.raw.trim(), "String s = \"x\";")
            }
            other => panic!("expected code block, got {other:?}"),
        }
        // Inline <code> markup is flattened into prose.
        match &t.answers[0].blocks[0].payload {
            super::super::BlockPayload::Text { raw, .. } => {
                assert!(raw.contains("Try Gson instead."), "raw: {raw}")
            }
            other => panic!("expected text block, got {other:?}"),
        }
        // Comments are ordered by creation date, not file order.
        let orders: Vec<(u64, u32)> = t.answers[0]
            .comments
            .iter()
            .map(|c| (c.id, c.order))
            .collect();
        assert_eq!(orders, vec![(51, 0), (50, 1)]);
        // The orphan answer was skipped and counted.
        assert_eq!(load.skipped_records, 1);
    }
}
