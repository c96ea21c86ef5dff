//! Exact computation of Tutte polynomials and derived graph invariants for
//! three self-similar graph families: Farey graphs, Koch networks, and
//! exponentially growing triangle networks.
//!
//! The crate is organised around a split between *fast* family-specific
//! routes and *slow* general-purpose oracles:
//!
//! * [`poly`]: sparse exact polynomial arithmetic over arbitrary-precision
//!   integers and rationals, plus the JSON wire formats.
//! * [`graph`]: multigraph representation and deterministic generators for
//!   the three families.
//! * [`oracle`]: brute-force and classical algorithms (subset expansion,
//!   deletion/contraction, Kirchhoff counting, reliability enumeration) used
//!   to cross-check the fast routes on small instances.
//! * [`farey`]: the two-polynomial recursion for Farey graphs and the
//!   closed forms it yields (spanning trees, connected spanning subgraphs,
//!   chromatic and reliability polynomials, ratio sequences).
//! * [`families`]: Koch and exponential networks, whose Tutte polynomials
//!   are pure powers of the triangle polynomial, and the Potts partition
//!   function bridge.
//!
//! All arithmetic is exact; nothing in this crate touches floating point.

pub mod families;
pub mod farey;
pub mod graph;
pub mod oracle;
pub mod poly;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Resource budgets for operations whose cost grows quickly with input size.
///
/// Every field has a default suitable for interactive use; callers that know
/// better (benchmarks, long-running jobs) can relax or tighten individual
/// caps. Budget violations surface as [`Error`] values, never panics.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Largest generation accepted by the Farey graph generators.
    pub graph_generation_cap: u32,
    /// Largest vertex count any generator is allowed to materialise.
    pub vertex_cap: u64,
    /// Edge cap for subset-enumeration oracles (2^edges subsets).
    pub subset_edge_cap: usize,
    /// Edge cap for the deletion/contraction oracle.
    pub delcon_edge_cap: usize,
    /// Recursion-node cap for the deletion/contraction oracle.
    pub delcon_node_cap: u64,
    /// Vertex cap for Kirchhoff (determinant-based) spanning tree counting.
    pub matrix_vertex_cap: usize,
    /// Largest generation for which the full bivariate Farey polynomial is
    /// computed. Term count grows as roughly 4^n.
    pub poly_generation_cap: u32,
    /// Largest generation for point evaluation of the Farey recursion.
    /// Values are doubly exponential in n; memory runs out long before
    /// this formal cap does.
    pub eval_generation_cap: u32,
    /// Largest generation for the univariate Farey closed forms.
    pub closed_form_generation_cap: u32,
    /// Coefficient-cell budget for polynomial exponentiation: an expansion
    /// is refused if the predicted dense size (degX+1)*(degY+1) exceeds it.
    pub pow_cell_cap: u64,
    /// Bit-size threshold below which power-form counts are rendered as
    /// explicit decimal digits.
    pub digit_render_bit_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            graph_generation_cap: 20,
            vertex_cap: 2_000_000,
            subset_edge_cap: 25,
            delcon_edge_cap: 40,
            delcon_node_cap: 100_000_000,
            matrix_vertex_cap: 5000,
            poly_generation_cap: 10,
            eval_generation_cap: 64,
            closed_form_generation_cap: 16,
            pow_cell_cap: 10_000_000,
            digit_render_bit_cap: 1_000_000,
        }
    }
}

/// Errors produced by budgeted or partial operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("graph has {edges} edges, oracle accepts at most {limit}")]
    TooManyEdges { edges: usize, limit: usize },

    #[error("deletion/contraction recursion exceeded {limit} nodes")]
    NodeBudgetExceeded { limit: u64 },

    #[error("generation {n} exceeds cap {cap}")]
    GenerationCapExceeded { n: u32, cap: u32 },

    #[error("graph would have {vertices} vertices, cap is {cap}")]
    VertexCapExceeded { vertices: u128, cap: u64 },

    #[error("expansion needs {cells} coefficient cells, cap is {cap}")]
    ExpansionTooLarge { cells: u128, cap: u64 },

    #[error("decimal rendering needs about {bits} bits, cap is {cap}")]
    RenderTooLarge { bits: String, cap: u64 },

    #[error("graph has {vertices} vertices, determinant route accepts at most {limit}")]
    MatrixTooLarge { vertices: usize, limit: usize },

    #[error("vertex {id} out of range for a graph with {num_vertices} vertices")]
    InvalidVertex { id: u32, num_vertices: u32 },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("polynomial degree {degree} exceeds nullity {nullity}")]
    DegreeExceedsNullity { degree: u32, nullity: u32 },

    #[error("evaluated base {value} is not an integer")]
    NonIntegerBase { value: String },

    #[error("Potts edge weight v must be nonzero")]
    ZeroPottsWeight,

    #[error("exponent {exponent} does not fit the expansion machinery")]
    ExponentTooLarge { exponent: String },

    #[error("{what} is undefined at the given point")]
    UndefinedAt { what: &'static str },

    #[error("invalid {what}: {reason}")]
    Parse { what: &'static str, reason: String },
}

impl Error {
    /// True for errors that mean "the requested computation is too big",
    /// as opposed to malformed input. CLI maps these to a distinct exit code.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::TooManyEdges { .. }
                | Error::NodeBudgetExceeded { .. }
                | Error::GenerationCapExceeded { .. }
                | Error::VertexCapExceeded { .. }
                | Error::ExpansionTooLarge { .. }
                | Error::RenderTooLarge { .. }
                | Error::MatrixTooLarge { .. }
                | Error::ExponentTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
