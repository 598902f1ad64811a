use fanforge_core::chain::random_chain;
use fanforge_core::FanChain;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Parameters of a generated corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub max_levels: usize,
    pub max_dim: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            seed: 1,
            count: 200,
            max_levels: 4,
            max_dim: 4,
        }
    }
}

/// Chains drawn from one ChaCha stream, so a seed fixes the whole corpus.
pub fn generate(params: &CorpusSpec) -> Vec<FanChain> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    (0..params.count)
        .map(|_| random_chain(&mut rng, params.max_levels, params.max_dim))
        .collect()
}
