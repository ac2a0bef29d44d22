//! Shared fixtures for the integration suites: the motivating JSON thread,
//! plus seeded synthetic corpora where the correct link is known by
//! construction.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use taskdoc_core::catalog::{ApiCatalog, ApiRecord};
use taskdoc_core::corpus::{load_corpus, CorpusFormat, Thread};
use taskdoc_core::eval::LabelRecord;

pub fn record(
    name: &str,
    module: &str,
    types: &[&str],
    methods: &[(&str, &[&str])],
    dependencies: &[&str],
    aliases: &[&str],
) -> ApiRecord {
    ApiRecord {
        name: name.to_string(),
        modules: vec![module.to_string()],
        packages: Vec::new(),
        types: types.iter().map(|t| t.to_string()).collect(),
        methods: methods
            .iter()
            .map(|(ty, ms)| {
                (
                    ty.to_string(),
                    ms.iter().map(|m| m.to_string()).collect::<BTreeSet<_>>(),
                )
            })
            .collect::<BTreeMap<_, _>>(),
        dependencies: dependencies.iter().map(|d| d.to_string()).collect(),
        aliases: aliases.iter().map(|a| a.to_string()).collect(),
    }
}

/// Write `lines` as a JSONL corpus file and load it back.
pub fn load_jsonl_threads(lines: &[String]) -> Vec<Thread> {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.jsonl");
    let mut file = std::fs::File::create(&path).unwrap();
    for line in lines {
        writeln!(file, "{line}").unwrap();
    }
    let load = load_corpus(&path, CorpusFormat::Jsonl).unwrap();
    assert_eq!(
        load.skipped_records, 0,
        "fixture corpus should be fully well-formed: {:?}",
        load.diagnostics
    );
    load.threads
}

// ===========================================================================
// The motivating thread: two snippets, two APIs, six comments
// ===========================================================================

/// A question about JSON-to-object conversion answered with a Gson snippet
/// and an org.json snippet. The first sentence of both posts is off-topic
/// chatter; comments C1/C2 react to the Gson example and C3/C4 to the
/// org.json one, while C5/C6 carry no opinion at all.
pub fn motivating_thread_line() -> String {
    let question = "Check my website for the full project background. \
                    I want to convert a JSON string into an equivalent Java object. \
                    I tried Gson for this but the generic types confused me. \
                    Maybe org.json works better for simple trees.";
    let answer = "Check this website for a longer tutorial. \
                  You can use Gson to convert the response text into a Java object. \
                  It maps your fields without any annotations. \
                  This works with the generic TypeToken wrapper too. \
                  <code>class Data { String name; }\\nGson gson = new Gson();\\nType listType = new TypeToken<List<Data>>(){}.getType();\\nList<Data> items = gson.fromJson(payload, listType);</code> \
                  If you prefer org.json the conversion needs a bit more typing. \
                  <code>JSONObject root = new JSONObject(payload);\\nJSONArray items = root.getJSONArray(\\\"items\\\");</code>";
    format!(
        concat!(
            r#"{{"id":2,"title":"How do I convert JSON to a Java object?","#,
            r#""tags":["java","json"],"#,
            r#""question":{{"id":20,"score":41,"body":"{question}"}},"#,
            r#""answers":[{{"id":21,"score":55,"body":"{answer}","comments":["#,
            r#"{{"id":211,"body":"The Gson solution turned out buggy for nested generics."}},"#,
            r#"{{"id":212,"body":"It works fine in version 2.2.4."}},"#,
            r#"{{"id":213,"body":"Converting a JsonArray with org.json is a bit buggy."}},"#,
            r#"{{"id":214,"body":"That scenario works flawless for me."}},"#,
            r#"{{"id":215,"body":"See the linked thread for a longer discussion."}},"#,
            r#"{{"id":216,"body":"I moved to a different desk anyway."}}"#,
            r#"]}}]}}"#
        ),
        question = question,
        answer = answer,
    )
}

/// Catalog around the motivating thread: the two APIs under discussion plus
/// three decoys, two of which depend on Gson.
pub fn motivating_catalog() -> ApiCatalog {
    ApiCatalog::new(vec![
        record(
            "com.google.code.gson",
            "gson",
            &[
                "com.google.gson.Gson",
                "com.google.gson.GsonBuilder",
                "com.google.gson.reflect.TypeToken",
            ],
            &[("com.google.gson.Gson", &["fromJson", "toJson"])],
            &[],
            &["Gson"],
        ),
        record(
            "org.json",
            "json",
            &["org.json.JSONObject", "org.json.JSONArray"],
            &[("org.json.JSONObject", &["getJSONArray", "put"])],
            &[],
            &[],
        ),
        record(
            "org.easygson",
            "easygson",
            &["org.easygson.JsonEntity"],
            &[("org.easygson.JsonEntity", &["create"])],
            &["com.google.code.gson"],
            &[],
        ),
        record(
            "org.immutables",
            "immutables",
            &["org.immutables.gson.Gson"],
            &[],
            &["com.google.code.gson"],
            &[],
        ),
        record(
            "com.fasterxml.jackson.core",
            "jackson",
            &["com.fasterxml.jackson.databind.ObjectMapper"],
            &[(
                "com.fasterxml.jackson.databind.ObjectMapper",
                &["readValue", "readTree"],
            )],
            &[],
            &["Jackson"],
        ),
    ])
    .unwrap()
}

// ===========================================================================
// Synthetic corpora with constructed ground truth
// ===========================================================================

pub struct SyntheticCorpus {
    pub threads: Vec<Thread>,
    pub catalog: ApiCatalog,
    pub gold: Vec<LabelRecord>,
}

/// `n_threads` threads over `n_apis` APIs with unique type ownership: every
/// thread names exactly one API in the prose right before its snippet, and
/// the snippet uses only that API's types, so the correct link is beyond
/// doubt.
pub fn unambiguous_corpus(seed: u64, n_threads: usize, n_apis: usize) -> SyntheticCorpus {
    assert!(n_apis > 0 && n_apis < 100);
    let mut rng = StdRng::seed_from_u64(seed);

    let records: Vec<ApiRecord> = (0..n_apis)
        .map(|i| {
            let client = format!("net.kit{i:02}.Kit{i:02}Client");
            ApiRecord {
                name: format!("net.kit{i:02}"),
                modules: vec![format!("kit{i:02}")],
                packages: Vec::new(),
                types: [client.clone(), format!("net.kit{i:02}.Kit{i:02}Config")]
                    .into_iter()
                    .collect(),
                methods: BTreeMap::from([(
                    client,
                    BTreeSet::from([format!("open{i:02}")]),
                )]),
                dependencies: Vec::new(),
                aliases: vec![format!("Kit{i:02}")],
            }
        })
        .collect();

    let titles = [
        "Reading batches with Kit{API}",
        "Kit{API} setup for beginners",
        "Streaming rows through Kit{API}",
    ];
    let questions = [
        "How do I wire kit{api} into my loader? The docs feel sparse.",
        "What does a minimal kit{api} run look like? I keep getting lost.",
        "Is kit{api} suited for nightly batch runs? Mine keep timing out.",
    ];
    let leads = [
        "Start with kit{api} and keep the defaults.",
        "You can lean on kit{api} for the heavy lifting.",
        "Wire kit{api} in first.",
    ];
    let tails = [
        "The defaults hold up well.",
        "Tune the pool size later.",
        "Logs go to the usual place.",
    ];
    let remarks = [
        "Kit{API} works great for this.",
        "It feels slow on huge files.",
        "The wiring took me an afternoon.",
    ];

    let mut lines = Vec::with_capacity(n_threads);
    let mut gold = Vec::with_capacity(n_threads);
    for t in 0..n_threads {
        let api = t % n_apis;
        let upper = format!("Kit{api:02}");
        let lower = format!("kit{api:02}");
        let fill = |template: &str| {
            template
                .replace("{API}", &upper)
                .replace("{api}", &lower)
        };
        let thread_id = 1_000 + t as u64;
        let question_id = thread_id * 10;
        let answer_id = thread_id * 10 + 1;

        let title = fill(titles[rng.gen_range(0..titles.len())]);
        let question = fill(questions[rng.gen_range(0..questions.len())]);
        let lead = fill(leads[rng.gen_range(0..leads.len())]);
        let tail = tails[rng.gen_range(0..tails.len())];
        let with_config = rng.gen_bool(0.5);
        let mut code = format!("{upper}Client client = new {upper}Client();");
        if with_config {
            code.push_str(&format!("\\n{upper}Config config = new {upper}Config();"));
        }
        code.push_str(&format!("\\nclient.open{api:02}(input);"));

        let mut comments = String::new();
        let n_comments = rng.gen_range(0..=2);
        for c in 0..n_comments {
            if c > 0 {
                comments.push(',');
            }
            let body = fill(remarks[rng.gen_range(0..remarks.len())]);
            comments.push_str(&format!(
                r#"{{"id":{},"body":"{}"}}"#,
                answer_id * 100 + c as u64,
                body
            ));
        }

        lines.push(format!(
            concat!(
                r#"{{"id":{tid},"title":"{title}","#,
                r#""question":{{"id":{qid},"body":"{question}"}},"#,
                r#""answers":[{{"id":{aid},"body":"{lead} <code>{code}</code> {tail}","#,
                r#""comments":[{comments}]}}]}}"#
            ),
            tid = thread_id,
            title = title,
            qid = question_id,
            question = question,
            aid = answer_id,
            lead = lead,
            code = code,
            tail = tail,
            comments = comments,
        ));
        gold.push(LabelRecord {
            snippet_id: format!("{thread_id}:{answer_id}:0"),
            label: taskdoc_core::eval::Label::Name(format!("net.kit{api:02}")),
        });
    }

    SyntheticCorpus {
        threads: load_jsonl_threads(&lines),
        catalog: ApiCatalog::new(records).unwrap(),
        gold,
    }
}

/// `n_pairs` threads where the mention and the snippet types match two APIs
/// equally; only the dependency edge between the pair tells them apart. For
/// even pairs the gold link is the `…a` API, for odd pairs the `…b` one, so
/// any tie-break that ignores dependencies gets half of them wrong.
pub fn dependency_ambiguous_corpus(seed: u64, n_pairs: usize) -> SyntheticCorpus {
    assert!(n_pairs < 100);
    let mut rng = StdRng::seed_from_u64(seed);

    let mut records = Vec::with_capacity(n_pairs * 2);
    let mut lines = Vec::with_capacity(n_pairs);
    let mut gold = Vec::with_capacity(n_pairs);
    for j in 0..n_pairs {
        let shared = format!("Duo{j:02}Stream");
        let name_a = format!("net.duo{j:02}a");
        let name_b = format!("net.duo{j:02}b");
        // The API that is depended upon wins the dependency filter.
        let (deps_a, deps_b, winner) = if j % 2 == 0 {
            (Vec::new(), vec![name_a.clone()], name_a.clone())
        } else {
            (vec![name_b.clone()], Vec::new(), name_b.clone())
        };
        let half = |name: &str, suffix: char, deps: Vec<String>| {
            let fqn = format!("{name}.{shared}");
            ApiRecord {
                name: name.to_string(),
                modules: vec![format!("duo{j:02}{suffix}")],
                packages: Vec::new(),
                types: BTreeSet::from([fqn.clone()]),
                methods: BTreeMap::from([(
                    fqn,
                    BTreeSet::from([format!("twin{j:02}")]),
                )]),
                dependencies: deps,
                aliases: Vec::new(),
            }
        };
        records.push(half(&name_a, 'a', deps_a));
        records.push(half(&name_b, 'b', deps_b));

        let thread_id = 5_000 + j as u64;
        let question_id = thread_id * 10;
        let answer_id = thread_id * 10 + 1;
        let questions = [
            "How should I stream rows with duo{j} here? The manuals disagree.",
            "What does a clean duo{j} setup look like? Mine feels fragile.",
        ];
        let question = questions[rng.gen_range(0..questions.len())]
            .replace("{j}", &format!("{j:02}"));
        let lead = format!("Pipe everything through duo{j:02} like below.");
        let code = format!("{shared} s = new {shared}();\\ns.twin{j:02}(rows);");
        lines.push(format!(
            concat!(
                r#"{{"id":{tid},"title":"Streaming rows in pairs","#,
                r#""question":{{"id":{qid},"body":"{question}"}},"#,
                r#""answers":[{{"id":{aid},"body":"{lead} <code>{code}</code>","comments":[]}}]}}"#
            ),
            tid = thread_id,
            qid = question_id,
            question = question,
            aid = answer_id,
            lead = lead,
            code = code,
        ));
        gold.push(LabelRecord {
            snippet_id: format!("{thread_id}:{answer_id}:0"),
            label: taskdoc_core::eval::Label::Name(winner.to_string()),
        });
    }

    SyntheticCorpus {
        threads: load_jsonl_threads(&lines),
        catalog: ApiCatalog::new(records).unwrap(),
        gold,
    }
}
