//! Normal-form games, coarse-grained games, and the perception pipeline:
//! base payoffs, then each player's grain matrix, then the numeric matrix
//! that player reasons about.
//!
//! Payoffs are stored densely, one cell per pure profile, row-major in
//! player order (the first player's strategy index varies slowest).

use std::borrow::Cow;
use std::collections::HashSet;

use num_traits::Zero;
use thiserror::Error;

use crate::coarse::{CoarseError, Grain, Partition};
use crate::profile::{MixedProfile, ProfileError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("a game needs at least two players, got {0}")]
    TooFewPlayers(usize),
    #[error("player {0} has no strategies")]
    NoStrategies(String),
    #[error("duplicate player name {0}")]
    DuplicatePlayer(String),
    #[error("duplicate strategy {strategy} for player {player}")]
    DuplicateStrategy { player: String, strategy: String },
    #[error("expected {expected} payoff cells, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("cell {cell} has {found} payoffs, expected one per player ({expected})")]
    CellArity {
        cell: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown player {0}")]
    UnknownPlayer(String),
    #[error("player {player} has no strategy {strategy}")]
    UnknownStrategy { player: String, strategy: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("player {0} uses the ignore preprocessing; the perceived game is ill-defined")]
    IgnorePreprocessing(String),
    #[error("expected one {what} per player ({expected}), found {found}")]
    PerPlayerArity {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Coarse(#[from] CoarseError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// A finite normal-form game with exact payoffs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Game {
    players: Vec<String>,
    strategies: Vec<Vec<String>>,
    shape: Vec<usize>,
    payoffs: Vec<Vec<Rational>>,
}

impl Game {
    /// `payoffs` holds one n-tuple per cell in row-major profile order.
    pub fn new(
        players: Vec<String>,
        strategies: Vec<Vec<String>>,
        payoffs: Vec<Vec<Rational>>,
    ) -> Result<Game, GameError> {
        let n = players.len();
        if n < 2 {
            return Err(GameError::TooFewPlayers(n));
        }
        if strategies.len() != n {
            return Err(GameError::PerPlayerArity {
                what: "strategy list",
                expected: n,
                found: strategies.len(),
            });
        }
        let mut seen = HashSet::new();
        for p in &players {
            if !seen.insert(p.as_str()) {
                return Err(GameError::DuplicatePlayer(p.clone()));
            }
        }
        for (p, list) in players.iter().zip(&strategies) {
            if list.is_empty() {
                return Err(GameError::NoStrategies(p.clone()));
            }
            let mut seen = HashSet::new();
            for s in list {
                if !seen.insert(s.as_str()) {
                    return Err(GameError::DuplicateStrategy {
                        player: p.clone(),
                        strategy: s.clone(),
                    });
                }
            }
        }
        let shape: Vec<usize> = strategies.iter().map(Vec::len).collect();
        let expected: usize = shape.iter().product();
        if payoffs.len() != expected {
            return Err(GameError::ShapeMismatch {
                expected,
                found: payoffs.len(),
            });
        }
        if let Some((cell, c)) = payoffs.iter().enumerate().find(|(_, c)| c.len() != n) {
            return Err(GameError::CellArity {
                cell,
                expected: n,
                found: c.len(),
            });
        }
        Ok(Game {
            players,
            strategies,
            shape,
            payoffs,
        })
    }

    /// Builds a game by evaluating `payoff` on every pure profile.
    pub fn from_fn<F>(
        players: Vec<String>,
        strategies: Vec<Vec<String>>,
        mut payoff: F,
    ) -> Result<Game, GameError>
    where
        F: FnMut(&[usize]) -> Vec<Rational>,
    {
        let shape: Vec<usize> = strategies.iter().map(Vec::len).collect();
        let cells = ProfileIter::new(&shape).map(|p| payoff(&p)).collect();
        Game::new(players, strategies, cells)
    }

    /// Two-player convenience constructor from a row-by-column table.
    pub fn bimatrix<S: AsRef<str>>(
        players: [&str; 2],
        rows: &[S],
        cols: &[S],
        cells: Vec<Vec<(Rational, Rational)>>,
    ) -> Result<Game, GameError> {
        let payoffs = cells
            .into_iter()
            .flat_map(|row| row.into_iter().map(|(a, b)| vec![a, b]))
            .collect();
        Game::new(
            players.iter().map(|p| p.to_string()).collect(),
            vec![
                rows.iter().map(|s| s.as_ref().to_string()).collect(),
                cols.iter().map(|s| s.as_ref().to_string()).collect(),
            ],
            payoffs,
        )
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn strategies(&self, k: usize) -> &[String] {
        &self.strategies[k]
    }

    pub fn all_strategies(&self) -> &[Vec<String>] {
        &self.strategies
    }

    /// Strategy count per player.
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn num_cells(&self) -> usize {
        self.payoffs.len()
    }

    pub fn player_index(&self, name: &str) -> Result<usize, GameError> {
        self.players
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| GameError::UnknownPlayer(name.to_string()))
    }

    pub fn strategy_index(&self, k: usize, name: &str) -> Result<usize, GameError> {
        self.strategies[k]
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| GameError::UnknownStrategy {
                player: self.players[k].clone(),
                strategy: name.to_string(),
            })
    }

    pub(crate) fn check_player(&self, k: usize) -> Result<(), GameError> {
        if k < self.num_players() {
            Ok(())
        } else {
            Err(GameError::UnknownPlayer(format!("#{k}")))
        }
    }

    pub fn cell_index(&self, profile: &[usize]) -> usize {
        debug_assert_eq!(profile.len(), self.shape.len());
        profile
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&s, &count)| acc * count + s)
    }

    pub fn cell(&self, profile: &[usize]) -> &[Rational] {
        &self.payoffs[self.cell_index(profile)]
    }

    pub fn payoff(&self, profile: &[usize], k: usize) -> &Rational {
        &self.cell(profile)[k]
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> &[Vec<Rational>] {
        &self.payoffs
    }

    /// Every pure profile in row-major (lexicographic) order.
    pub fn profiles(&self) -> ProfileIter {
        ProfileIter::new(&self.shape)
    }

    /// Same players and strategies with every payoff mapped through `f`.
    pub fn try_map_payoffs<E, F>(&self, mut f: F) -> Result<Game, E>
    where
        F: FnMut(&Rational) -> Result<Rational, E>,
    {
        let payoffs = self
            .payoffs
            .iter()
            .map(|c| c.iter().map(&mut f).collect::<Result<Vec<_>, E>>())
            .collect::<Result<Vec<_>, E>>()?;
        Ok(Game {
            players: self.players.clone(),
            strategies: self.strategies.clone(),
            shape: self.shape.clone(),
            payoffs,
        })
    }

    /// True when all of player `k`'s payoffs are one value.
    pub fn is_uniform_for(&self, k: usize) -> bool {
        let first = &self.payoffs[0][k];
        self.payoffs.iter().all(|c| &c[k] == first)
    }
}

/// Lexicographic iterator over pure profiles of a given shape.
#[derive(Debug, Clone)]
pub struct ProfileIter {
    shape: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl ProfileIter {
    pub fn new(shape: &[usize]) -> ProfileIter {
        let next = if shape.iter().all(|&c| c > 0) {
            Some(vec![0; shape.len()])
        } else {
            None
        };
        ProfileIter {
            shape: shape.to_vec(),
            next,
        }
    }
}

impl Iterator for ProfileIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for k in (0..succ.len()).rev() {
            succ[k] += 1;
            if succ[k] < self.shape[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(current)
    }
}

/// How a player turns a perceived grain back into a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Preprocessing {
    /// Entropy-maximizing preprocessing (midpoint of the grain).
    #[default]
    Emp,
    /// The player gives up on the coarse matrix; transforms fail.
    Ignore,
}

/// A base game plus one partition and one preprocessing choice per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoarseGame {
    base: Game,
    partitions: Vec<Partition>,
    preprocessing: Vec<Preprocessing>,
}

impl CoarseGame {
    pub fn new(
        base: Game,
        partitions: Vec<Partition>,
        preprocessing: Vec<Preprocessing>,
    ) -> Result<CoarseGame, GameError> {
        let n = base.num_players();
        if partitions.len() != n {
            return Err(GameError::PerPlayerArity {
                what: "partition",
                expected: n,
                found: partitions.len(),
            });
        }
        if preprocessing.len() != n {
            return Err(GameError::PerPlayerArity {
                what: "preprocessing",
                expected: n,
                found: preprocessing.len(),
            });
        }
        Ok(CoarseGame {
            base,
            partitions,
            preprocessing,
        })
    }

    /// Every player uses EMP.
    pub fn with_emp(base: Game, partitions: Vec<Partition>) -> Result<CoarseGame, GameError> {
        let n = base.num_players();
        CoarseGame::new(base, partitions, vec![Preprocessing::Emp; n])
    }

    /// Every player perceives the base game exactly.
    pub fn finest(base: Game) -> CoarseGame {
        let n = base.num_players();
        CoarseGame {
            base,
            partitions: vec![Partition::finest(); n],
            preprocessing: vec![Preprocessing::Emp; n],
        }
    }

    pub fn base(&self) -> &Game {
        &self.base
    }

    pub fn num_players(&self) -> usize {
        self.base.num_players()
    }

    pub fn partition(&self, k: usize) -> &Partition {
        &self.partitions[k]
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn preprocessing(&self, k: usize) -> Preprocessing {
        self.preprocessing[k]
    }

    pub fn preprocessings(&self) -> &[Preprocessing] {
        &self.preprocessing
    }

    /// Player `k`'s grain-valued view: every payoff of every cell coarsened
    /// through `k`'s partition.
    pub fn coarse_view(&self, k: usize) -> Result<GrainMatrix, GameError> {
        self.base.check_player(k)?;
        let partition = &self.partitions[k];
        let cells = self
            .base
            .cells()
            .iter()
            .map(|c| c.iter().map(|x| partition.coarsen(x)).collect())
            .collect::<Result<Vec<Vec<Grain>>, _>>()?;
        Ok(GrainMatrix {
            shape: self.base.shape().to_vec(),
            cells,
        })
    }

    /// The numeric matrix player `k` actually reasons about.
    pub fn perceived_game(&self, k: usize) -> Result<PerceivedGame, GameError> {
        self.base.check_player(k)?;
        if self.preprocessing[k] == Preprocessing::Ignore {
            return Err(GameError::IgnorePreprocessing(self.base.players()[k].clone()));
        }
        let partition = &self.partitions[k];
        let game = self.base.try_map_payoffs(|x| partition.perceive(x))?;
        Ok(PerceivedGame {
            game,
            perceiver: k,
            partition: partition.clone(),
        })
    }

    /// The matrix seen from a perspective: the base or some player's perceived one.
    pub fn game_for(&self, perspective: Perspective) -> Result<Cow<'_, Game>, GameError> {
        match perspective {
            Perspective::Base => Ok(Cow::Borrowed(&self.base)),
            Perspective::Perceived(k) => Ok(Cow::Owned(self.perceived_game(k)?.game)),
        }
    }

    /// Base plus one perceived perspective per player.
    pub fn perspectives(&self) -> Vec<Perspective> {
        std::iter::once(Perspective::Base)
            .chain((0..self.num_players()).map(Perspective::Perceived))
            .collect()
    }
}

/// Where a payoff matrix comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Perspective {
    Base,
    Perceived(usize),
}

impl Perspective {
    /// `"base"` or `"<player name>'s view"`.
    pub fn label(&self, game: &Game) -> String {
        match self {
            Perspective::Base => "base".to_string(),
            Perspective::Perceived(k) => format!("{}'s view", game.players()[*k]),
        }
    }
}

/// Grain-valued payoff matrix, same indexing as the originating game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrainMatrix {
    shape: Vec<usize>,
    cells: Vec<Vec<Grain>>,
}

impl GrainMatrix {
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn cells(&self) -> &[Vec<Grain>] {
        &self.cells
    }

    pub fn cell(&self, profile: &[usize]) -> &[Grain] {
        let idx = profile
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&s, &count)| acc * count + s);
        &self.cells[idx]
    }
}

/// A perceived matrix together with who perceives it and through which partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerceivedGame {
    pub game: Game,
    pub perceiver: usize,
    pub partition: Partition,
}

/// Free-function form of [`CoarseGame::coarse_view`].
pub fn coarse_view(cg: &CoarseGame, k: usize) -> Result<GrainMatrix, GameError> {
    cg.coarse_view(k)
}

/// Free-function form of [`CoarseGame::perceived_game`].
pub fn perceived_game(cg: &CoarseGame, k: usize) -> Result<PerceivedGame, GameError> {
    cg.perceived_game(k)
}

/// Expected payoff of player `k`: sum over all cells of the product of the players' probabilities
/// times player `k`'s payoff.
pub fn expected_payoff(g: &Game, profile: &MixedProfile, k: usize) -> Result<Rational, GameError> {
    profile.check_shape(g)?;
    g.check_player(k)?;
    let mut total = Rational::zero();
    for (cell, payoffs) in g.profiles().zip(g.cells()) {
        let weight = cell_weight(profile.vectors(), &cell);
        if !weight.is_zero() {
            total += weight * &payoffs[k];
        }
    }
    Ok(total)
}

pub(crate) fn cell_weight(vectors: &[Vec<Rational>], cell: &[usize]) -> Rational {
    let mut w = vectors[0][cell[0]].clone();
    for (v, &s) in vectors.iter().zip(cell).skip(1) {
        if w.is_zero() {
            break;
        }
        w *= &v[s];
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::{Coverage, Grain};
    use crate::rational::{int, ratio};

    fn pair(a: i64, b: i64) -> (Rational, Rational) {
        (int(a), int(b))
    }

    fn pd() -> Game {
        Game::bimatrix(
            ["player1", "player2"],
            &["Silent", "Confess"],
            &["Silent", "Confess"],
            vec![
                vec![pair(-1, -1), pair(-5, 0)],
                vec![pair(0, -5), pair(-3, -3)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn profiles_are_row_major() {
        let shape = [2, 3];
        let all: Vec<_> = ProfileIter::new(&shape).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        let g = pd();
        for (i, p) in g.profiles().enumerate() {
            assert_eq!(g.cell_index(&p), i);
        }
    }

    #[test]
    fn construction_errors() {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert!(matches!(
            Game::new(s(&["a"]), vec![s(&["x"])], vec![vec![int(0)]]),
            Err(GameError::TooFewPlayers(1))
        ));
        assert!(matches!(
            Game::new(s(&["a", "a"]), vec![s(&["x"]), s(&["y"])], vec![vec![int(0), int(0)]]),
            Err(GameError::DuplicatePlayer(_))
        ));
        assert!(matches!(
            Game::new(s(&["a", "b"]), vec![s(&["x", "x"]), s(&["y"])], vec![]),
            Err(GameError::DuplicateStrategy { .. })
        ));
        assert!(matches!(
            Game::new(s(&["a", "b"]), vec![s(&["x"]), s(&["y"])], vec![]),
            Err(GameError::ShapeMismatch { expected: 1, found: 0 })
        ));
        assert!(matches!(
            Game::new(s(&["a", "b"]), vec![s(&["x"]), s(&["y"])], vec![vec![int(1)]]),
            Err(GameError::CellArity { .. })
        ));
    }

    #[test]
    fn finest_view_is_singletons() {
        let cg = CoarseGame::finest(pd());
        let view = cg.coarse_view(0).unwrap();
        for (cell, grains) in pd().cells().iter().zip(view.cells()) {
            for (x, g) in cell.iter().zip(grains) {
                assert_eq!(g, &Grain::point(x.clone()));
            }
        }
        assert_eq!(cg.perceived_game(1).unwrap().game, pd());
    }

    #[test]
    fn ignore_preprocessing_errors_at_transform_time() {
        let cg = CoarseGame::new(
            pd(),
            vec![Partition::finest(), Partition::finest()],
            vec![Preprocessing::Emp, Preprocessing::Ignore],
        )
        .unwrap();
        assert!(cg.perceived_game(0).is_ok());
        assert!(matches!(
            cg.perceived_game(1),
            Err(GameError::IgnorePreprocessing(_))
        ));
        // the grain view is still available
        assert!(cg.coarse_view(1).is_ok());
    }

    #[test]
    fn strict_partition_propagates_uncovered() {
        let strict = Partition::new(
            vec![Grain::closed_open(int(-6), int(0)).unwrap()],
            Coverage::Strict,
        )
        .unwrap();
        let cg = CoarseGame::with_emp(pd(), vec![Partition::finest(), strict]).unwrap();
        assert!(matches!(
            cg.coarse_view(1),
            Err(GameError::Coarse(CoarseError::Uncovered(_)))
        ));
    }

    #[test]
    fn expected_payoff_example() {
        let g = Game::bimatrix(
            ["p1", "p2"],
            &["C", "D"],
            &["C", "D"],
            vec![vec![pair(5, 3), pair(1, 4)], vec![pair(2, 1), pair(3, 0)]],
        )
        .unwrap();
        let m = MixedProfile::new(vec![
            vec![ratio(1, 2), ratio(1, 2)],
            vec![ratio(2, 5), ratio(3, 5)],
        ])
        .unwrap();
        // 5*(1/5) + 1*(3/10) + 2*(1/5) + 3*(3/10) = 13/5
        assert_eq!(expected_payoff(&g, &m, 0).unwrap(), ratio(13, 5));
        // 3*(1/5) + 4*(3/10) + 1*(1/5) + 0 = 2
        assert_eq!(expected_payoff(&g, &m, 1).unwrap(), int(2));
    }

    #[test]
    fn expected_payoff_rejects_wrong_shape() {
        let m = MixedProfile::new(vec![vec![int(1)], vec![int(1)]]).unwrap();
        assert!(matches!(
            expected_payoff(&pd(), &m, 0),
            Err(GameError::DimensionMismatch(_))
        ));
    }
}
