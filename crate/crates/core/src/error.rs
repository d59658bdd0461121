use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("image decode failed: {0}")]
    Decode(String),

    #[error("unsupported image format")]
    UnsupportedFormat,

    #[error("image encode failed: {0}")]
    Encode(String),

    #[error("image {width}x{height} is smaller than the required {min_width}x{min_height}")]
    ImageTooSmall {
        width: u32,
        height: u32,
        min_width: u32,
        min_height: u32,
    },

    #[error("duplicate image id `{0}`")]
    DuplicateId(String),

    #[error("unknown image id `{0}`")]
    UnknownId(String),

    #[error("ground truth is empty")]
    EmptyGroundTruth,

    #[error("image `{0}` appears in more than one cluster")]
    DuplicateMember(String),

    #[error("image `{0}` was matched with itself")]
    SelfMatch(String),

    #[error("score {0} is outside [0, 1]")]
    ScoreOutOfRange(f64),

    #[error("unknown schema version {0}")]
    UnknownSchemaVersion(u32),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("hash algorithm mismatch: {0} vs {1}")]
    AlgorithmMismatch(String, String),

    #[error("TLSH input too short: {0} bytes (minimum 50)")]
    TlshTooShort(usize),

    #[error("TLSH input has too little byte variety to build a digest")]
    TlshDegenerate,

    #[error("feature set is empty")]
    EmptyFeatureSet,

    #[error("need at least {needed} train descriptors, got {got}")]
    TooFewDescriptors { needed: usize, got: usize },

    #[error("descriptor patch at ({x:.1}, {y:.1}) falls outside the image")]
    PatchOutOfBounds { x: f32, y: f32 },

    #[error("{matches} matches exceed the {slots} descriptor slots of the pair score")]
    MatchCountOverflow { matches: usize, slots: usize },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("degenerate point configuration")]
    DegenerateConfiguration,

    #[error("need at least {needed} matches, got {got}")]
    TooFewMatches { needed: usize, got: usize },

    #[error("RANSAC found no consensus")]
    NoConsensus,

    #[error("point maps to infinity under the homography")]
    PointAtInfinity,

    #[error("empty edge set: intersection ratio undefined")]
    EmptyEdgeSet,

    #[error("max score is zero: normalization undefined")]
    ZeroMaxScore,

    #[error("graphs are defined over different node sets")]
    NodeSetMismatch,

    #[error("invalid configuration grid: {0}")]
    InvalidGrid(String),

    #[error("{0}")]
    Other(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
