//! Static HTML rendering of mined scenarios.
//!
//! One index page ranks APIs by scenario count; one page per API lists its
//! scenarios with code, problem/solution summary, reactions and a See-Also
//! block of scenarios (from any API) sharing at least one used type. All
//! links are relative and the output is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::pipeline::{SentenceRecord, UsageScenario};

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

const STYLE: &str = "\
body { font-family: sans-serif; max-width: 60em; margin: 2em auto; padding: 0 1em; }\n\
pre { background: #f4f4f4; padding: 0.8em; overflow-x: auto; }\n\
section.scenario { border-top: 1px solid #ccc; padding: 1em 0; }\n\
li.positive { color: #1a7f37; }\n\
li.negative { color: #b42318; }\n\
p.low-confidence { color: #666; font-style: italic; }\n\
span.method { color: #666; font-size: 0.9em; }\n";

/// Render `scenarios` into `out_dir` (created if missing). Returns the
/// written paths, index first.
pub fn render_site(scenarios: &[UsageScenario], out_dir: &Path) -> Result<Vec<PathBuf>, RenderError> {
    fs::create_dir_all(out_dir).map_err(|source| RenderError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;

    let mut by_api: BTreeMap<&str, Vec<&UsageScenario>> = BTreeMap::new();
    for scenario in scenarios {
        by_api.entry(&scenario.api.name).or_default().push(scenario);
    }
    let slugs = api_slugs(by_api.keys().copied());

    // Count descending, then name ascending.
    let mut ranked: Vec<(&str, &Vec<&UsageScenario>)> =
        by_api.iter().map(|(name, list)| (*name, list)).collect();
    ranked.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));

    let mut written = Vec::new();
    let index_path = out_dir.join("index.html");
    write_page(&index_path, &index_page(&ranked, &slugs))?;
    written.push(index_path);

    for (name, list) in &by_api {
        let path = out_dir.join(format!("{}.html", slugs[*name]));
        write_page(&path, &api_page(name, list, scenarios, &slugs))?;
        written.push(path);
    }
    Ok(written)
}

/// Filename slugs for API names: lowercase alphanumerics with dashes,
/// deduplicated with a numeric suffix when two names collapse together.
fn api_slugs<'a>(names: impl Iterator<Item = &'a str>) -> BTreeMap<&'a str, String> {
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut slugs = BTreeMap::new();
    for name in names {
        let mut base = String::new();
        let mut last_dash = true;
        for c in name.chars() {
            if c.is_ascii_alphanumeric() {
                base.push(c.to_ascii_lowercase());
                last_dash = false;
            } else if !last_dash {
                base.push('-');
                last_dash = true;
            }
        }
        let base = base.trim_end_matches('-');
        let base = if base.is_empty() { "api" } else { base };
        let mut slug = base.to_string();
        let mut n = 1;
        while !taken.insert(slug.clone()) {
            n += 1;
            slug = format!("{base}-{n}");
        }
        slugs.insert(name, slug);
    }
    slugs
}

fn anchor(scenario: &UsageScenario) -> String {
    format!("s-{}", scenario.id.replace(':', "-"))
}

fn page(title: &str, body: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n\
         <title>{}</title>\n<style>\n{STYLE}</style>\n</head>\n<body>\n{body}</body>\n</html>\n",
        escape_html(title)
    )
}

fn index_page(ranked: &[(&str, &Vec<&UsageScenario>)], slugs: &BTreeMap<&str, String>) -> String {
    let mut body = String::from("<h1>API usage scenarios</h1>\n");
    if ranked.is_empty() {
        body.push_str("<p>No scenarios mined.</p>\n");
    } else {
        body.push_str("<ol>\n");
        for (name, list) in ranked {
            let noun = if list.len() == 1 { "scenario" } else { "scenarios" };
            writeln!(
                body,
                "<li><a href=\"{}.html\">{}</a> — {} {noun}</li>",
                slugs[*name],
                escape_html(name),
                list.len()
            )
            .unwrap();
        }
        body.push_str("</ol>\n");
    }
    page("API usage scenarios", &body)
}

fn api_page(
    name: &str,
    list: &[&UsageScenario],
    all: &[UsageScenario],
    slugs: &BTreeMap<&str, String>,
) -> String {
    let mut body = format!(
        "<p><a href=\"index.html\">All APIs</a></p>\n<h1>{}</h1>\n",
        escape_html(name)
    );
    for scenario in list {
        body.push_str(&scenario_section(scenario, all, slugs));
    }
    page(name, &body)
}

fn scenario_section(
    scenario: &UsageScenario,
    all: &[UsageScenario],
    slugs: &BTreeMap<&str, String>,
) -> String {
    let mut s = format!(
        "<section class=\"scenario\" id=\"{}\">\n<h2>{}</h2>\n\
         <span class=\"method\">snippet {} — linked by {}</span>\n",
        anchor(scenario),
        escape_html(&scenario.title),
        escape_html(&scenario.id),
        match scenario.api.method {
            crate::linker::LinkMethod::Proximity => "mention proximity",
            crate::linker::LinkMethod::Probabilistic => "usage similarity",
            crate::linker::LinkMethod::Undecided => "nothing",
        },
    );

    if let Some(description) = &scenario.description {
        s.push_str("<h3>Problem</h3>\n");
        s.push_str(&sentence_list(
            &description.problem,
            description.problem_low_confidence,
        ));
        s.push_str("<h3>Solution</h3>\n");
        s.push_str(&sentence_list(
            &description.solution,
            description.solution_low_confidence,
        ));
    }

    writeln!(s, "<pre><code>{}</code></pre>", escape_html(&scenario.code)).unwrap();

    if !scenario.reactions.is_empty() {
        s.push_str("<h3>Reactions</h3>\n<ul>\n");
        for reaction in &scenario.reactions {
            let class = match reaction.polarity {
                crate::opinion::Polarity::Positive => "positive",
                crate::opinion::Polarity::Negative => "negative",
                crate::opinion::Polarity::Neutral => "neutral",
            };
            writeln!(
                s,
                "<li class=\"{class}\">{}</li>",
                escape_html(&reaction.text)
            )
            .unwrap();
        }
        s.push_str("</ul>\n");
    }

    let related = see_also(scenario, all);
    if !related.is_empty() {
        s.push_str("<h3>See also</h3>\n<ul>\n");
        for other in related {
            writeln!(
                s,
                "<li><a href=\"{}.html#{}\">{}</a> ({})</li>",
                slugs[other.api.name.as_str()],
                anchor(other),
                escape_html(&other.title),
                escape_html(&other.api.name)
            )
            .unwrap();
        }
        s.push_str("</ul>\n");
    }
    s.push_str("</section>\n");
    s
}

fn sentence_list(sentences: &[SentenceRecord], low_confidence: bool) -> String {
    let mut s = String::new();
    if sentences.is_empty() {
        s.push_str("<p class=\"low-confidence\">No description extracted.</p>\n");
        return s;
    }
    if low_confidence {
        s.push_str("<p class=\"low-confidence\">Low confidence selection.</p>\n");
    }
    s.push_str("<ul>\n");
    for sentence in sentences {
        writeln!(s, "<li>{}</li>", escape_html(&sentence.text)).unwrap();
    }
    s.push_str("</ul>\n");
    s
}

/// Scenarios (of any API) sharing at least one used type with `scenario`,
/// in corpus order.
fn see_also<'a>(scenario: &UsageScenario, all: &'a [UsageScenario]) -> Vec<&'a UsageScenario> {
    let own: BTreeSet<&str> = scenario.types_used.iter().map(|t| t.as_str()).collect();
    all.iter()
        .filter(|other| other.id != scenario.id)
        .filter(|other| other.types_used.iter().any(|t| own.contains(t.as_str())))
        .collect()
}

fn write_page(path: &Path, contents: &str) -> Result<(), RenderError> {
    fs::write(path, contents).map_err(|source| RenderError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn escape_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}
