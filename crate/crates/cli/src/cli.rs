use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::json;

use fspl_core::corpus::load_conll;
use fspl_core::feedback::{process_feedback, DEFAULT_EPSILON};
use fspl_core::lang::parse;
use fspl_core::{
    ApplicationProfile, EmbeddingStore, Extractor, FeatureInput, FeedbackEvent, KnowledgeBase,
    NewSimRule, Policy, RecommendationSet, Recommender, SimilarityModel, Thesaurus,
};

use crate::service::{self, ServiceConfig};

/// Exit status for input that fails validation.
pub const EXIT_INVALID: i32 = 1;
/// Exit status for filesystem and network failures.
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fspl",
    version,
    about = "Feature specification extraction and recommendation"
)]
pub struct Cli {
    /// Seed for stochastic defaults. Every current default is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a feature specification over an annotated corpus.
    Extract(ExtractArgs),
    /// Inspect or extend a knowledge base.
    #[command(subcommand)]
    Kb(KbCommand),
    /// Rank knowledge-base features for a new application profile.
    Recommend(RecommendArgs),
    /// Apply user corrections to a saved recommendation set.
    Feedback(FeedbackArgs),
    /// Serve the JSON API.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Word vectors, needed by Semantic_Similarity.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub thesaurus: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum KbCommand {
    /// Add an application and its features; creates the file when missing.
    Add {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        /// JSON array of {feature_id?, fspl_source, relevance}.
        #[arg(long)]
        features: PathBuf,
    },
    List {
        #[arg(long)]
        kb: PathBuf,
    },
    Show {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        id: String,
    },
    /// Validate and print the knowledge base in canonical form.
    Export {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long, default_value = "probable")]
    pub policy: Policy,
    #[arg(long)]
    pub thesaurus: Option<PathBuf>,
    /// Similarity model written by `feedback`; used once fitted.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Rule {
    Scaled,
    RawMean,
}

#[derive(Debug, Args)]
pub struct FeedbackArgs {
    #[arg(long)]
    pub kb: PathBuf,
    /// Output of `recommend`.
    #[arg(long)]
    pub recs: PathBuf,
    #[arg(long)]
    pub event: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value = "scaled")]
    pub rule: Rule,
    /// Similarity model to retrain; created from knowledge-base proximities
    /// when missing, which needs `--embeddings`.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub thesaurus: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub kb: PathBuf,
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long)]
    pub thesaurus: Option<PathBuf>,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// 0 picks a free port.
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Directory of static files served at `/`.
    #[arg(long)]
    pub assets: Option<PathBuf>,
    /// Session snapshot written on shutdown.
    #[arg(long)]
    pub sessions: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
}

/// A failure and the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    fn io(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: EXIT_IO,
            error: error.into(),
        }
    }

    fn invalid(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: EXIT_INVALID,
            error: error.into(),
        }
    }
}

impl From<fspl_core::Error> for Failure {
    fn from(e: fspl_core::Error) -> Self {
        if e.is_io() {
            Failure::io(e)
        } else {
            Failure::invalid(e)
        }
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn read_text(path: &Path) -> Outcome<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::io(anyhow::anyhow!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::invalid(anyhow::anyhow!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::io(anyhow::anyhow!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(Failure::io)
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn load_thesaurus(path: Option<&Path>) -> Outcome<Option<Thesaurus>> {
    Ok(path.map(Thesaurus::load).transpose()?)
}

fn extract(args: &ExtractArgs) -> Outcome {
    let spec = parse(&read_text(&args.spec)?)
        .map_err(|e| Failure::invalid(anyhow::anyhow!("{}: {e}", args.spec.display())))?;
    let corpus = load_conll(&args.corpus)?;
    let store = args
        .embeddings
        .as_deref()
        .map(EmbeddingStore::load)
        .transpose()?;
    let thesaurus = load_thesaurus(args.thesaurus.as_deref())?;
    let mut extractor = Extractor::new(&spec);
    if let Some(store) = &store {
        extractor = extractor.with_embeddings(store);
    }
    if let Some(t) = &thesaurus {
        extractor = extractor.with_thesaurus(t);
    }
    let matrix = extractor.run(&corpus)?;
    info!("{} rows, {} columns", matrix.n_rows(), matrix.columns.len());
    let text = match args.format {
        Format::Csv => matrix.to_csv()?,
        Format::Jsonl => matrix.to_jsonl(),
    };
    emit(args.out.as_deref(), &text)
}

fn load_or_new_kb(path: &Path) -> Outcome<KnowledgeBase> {
    if path.exists() {
        Ok(KnowledgeBase::load(path)?)
    } else {
        Ok(KnowledgeBase::new())
    }
}

fn kb(command: &KbCommand) -> Outcome {
    match command {
        KbCommand::Add {
            kb,
            profile,
            features,
        } => {
            let mut base = load_or_new_kb(kb)?;
            let profile = ApplicationProfile::load(profile)?;
            let features: Vec<FeatureInput> = read_json(features)?;
            let id = profile.id.clone();
            base.add_application(profile, features)?;
            base.save(kb)?;
            emit(
                None,
                &format!(
                    "added {id}; {} applications, {} features\n",
                    base.m(),
                    base.k()
                ),
            )
        }
        KbCommand::List { kb } => {
            let base = KnowledgeBase::load(kb)?;
            let mut text = String::new();
            for (i, app) in base.applications().iter().enumerate() {
                text.push_str(&format!(
                    "{}\t{}\t{}\t{} features\n",
                    app.id,
                    app.annotation_level.as_str(),
                    app.performance_metric,
                    base.features_of(i).len()
                ));
            }
            emit(None, &text)
        }
        KbCommand::Show { kb, id } => {
            let base = KnowledgeBase::load(kb)?;
            let i = base.app_index(id).ok_or_else(|| {
                Failure::invalid(fspl_core::Error::UnknownApplication(id.clone()))
            })?;
            emit(None, &pretty(&service::application_view(&base, i)))
        }
        KbCommand::Export { kb, out } => {
            let base = KnowledgeBase::load(kb)?;
            emit(out.as_deref(), &base.to_json_string())
        }
    }
}

fn load_model(path: Option<&Path>) -> Outcome<Option<SimilarityModel>> {
    match path {
        Some(p) if p.exists() => Ok(Some(read_json(p)?)),
        _ => Ok(None),
    }
}

fn recommend(args: &RecommendArgs) -> Outcome {
    let base = KnowledgeBase::load(&args.kb)?;
    if base.is_empty() {
        return Err(fspl_core::Error::EmptyKnowledgeBase.into());
    }
    let profile = ApplicationProfile::load(&args.profile)?;
    let store = EmbeddingStore::load(&args.embeddings)?;
    let thesaurus = load_thesaurus(args.thesaurus.as_deref())?;
    let model = load_model(args.model.as_deref())?;

    let mut rec = Recommender::new(&base, &store);
    if let Some(t) = &thesaurus {
        rec = rec.with_thesaurus(t);
    }
    if let Some(m) = model.as_ref().filter(|m| m.is_fitted()) {
        rec = rec.with_model(m);
    }
    let set = rec.recommend(&profile, args.policy)?;
    emit(args.out.as_deref(), &pretty(&set))
}

fn feedback(args: &FeedbackArgs) -> Outcome {
    if args.epsilon.is_nan() || args.epsilon <= 0.0 {
        return Err(Failure::invalid(anyhow::anyhow!(
            "--epsilon must be positive"
        )));
    }
    let base = KnowledgeBase::load(&args.kb)?;
    let recs: RecommendationSet = read_json(&args.recs)?;
    let event: FeedbackEvent = read_json(&args.event)?;
    let rule = match args.rule {
        Rule::Scaled => NewSimRule::Scaled,
        Rule::RawMean => NewSimRule::RawMean,
    };
    for s in &recs.similarities {
        if base.app_index(&s.app_id).is_none() {
            return Err(fspl_core::Error::UnknownApplication(s.app_id.clone()).into());
        }
    }
    let outcome = process_feedback(&event, &recs, rule, args.epsilon)?;

    let mut retrained = false;
    let mut model_version = None;
    if let Some(path) = &args.model {
        let mut model = match load_model(Some(path))? {
            Some(m) => m,
            None => {
                let vectors = args.embeddings.as_deref().ok_or_else(|| {
                    Failure::invalid(anyhow::anyhow!(
                        "--embeddings is required to create a new model"
                    ))
                })?;
                let store = EmbeddingStore::load(vectors)?;
                let thesaurus = load_thesaurus(args.thesaurus.as_deref())?;
                let mut rec = Recommender::new(&base, &store);
                if let Some(t) = &thesaurus {
                    rec = rec.with_thesaurus(t);
                }
                SimilarityModel::bootstrap(rec.pair_samples()?)
            }
        };
        let pairs = outcome.training_pairs(&recs);
        if !pairs.is_empty() {
            retrained = model.refit_with(pairs)?;
        }
        model_version = Some(model.version());
        std::fs::write(path, pretty(&model))
            .map_err(|e| Failure::io(anyhow::anyhow!("{}: {e}", path.display())))?;
    }
    let report = json!({
        "ledger": outcome.ledger,
        "new_sim": outcome.new_sim,
        "retrain": outcome.retrain,
        "skipped": outcome.skipped,
        "retrained": retrained,
        "model_version": model_version,
    });
    emit(None, &pretty(&report))
}

fn serve(args: &ServeArgs) -> Outcome {
    let config = ServiceConfig {
        kb_path: Some(args.kb.clone()),
        epsilon: args.epsilon,
        rule: NewSimRule::Scaled,
        sessions_path: args.sessions.clone(),
    };
    let kb = load_or_new_kb(&args.kb)?;
    let store = EmbeddingStore::load(&args.embeddings)?;
    let thesaurus = load_thesaurus(args.thesaurus.as_deref())?;
    let state = service::AppState::new(kb, store, thesaurus, config)?;
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(Failure::io)?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((args.host.as_str(), args.port))
            .await
            .map_err(Failure::io)?;
        let addr = listener.local_addr().map_err(Failure::io)?;
        println!("listening on http://{addr}");
        std::io::stdout().flush().ok();
        let app = service::router(state.clone(), args.assets.as_deref());
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                tokio::signal::ctrl_c().await.ok();
            })
            .await
            .map_err(Failure::io)?;
        state.snapshot_sessions().map_err(Failure::io)
    })
}

fn dispatch(cli: &Cli) -> Outcome {
    info!("seed {}", cli.seed);
    match &cli.command {
        Command::Extract(a) => extract(a),
        Command::Kb(c) => kb(c),
        Command::Recommend(a) => recommend(a),
        Command::Feedback(a) => feedback(a),
        Command::Serve(a) => serve(a),
    }
}

/// Parse arguments, run the command and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.error);
            f.code
        }
    }
}
