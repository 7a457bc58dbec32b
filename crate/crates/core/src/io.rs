//! JSON file formats for games, profiles and reduction mappings.
//!
//! Every rational is a `"numerator/denominator"` string, so files are exact
//! and round-trip bit for bit.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{AnyGame, BimatrixGame, Game, NormalFormGame, PlayerRole, PolymatrixGame, Role};
use crate::matrix::{Matrix, SparseMatrix};
use crate::profile::{MixedProfile, MixedStrategy};
use crate::rational::{format, parse, Rational};
use crate::reduction::{GameMapping, ReductionParams};

pub const FORMAT_VERSION: u32 = 1;
const GAME_FORMAT: &str = "nashreduce-game";
const PROFILE_FORMAT: &str = "nashreduce-profile";
const MAPPING_FORMAT: &str = "nashreduce-mapping";

#[derive(Debug, Serialize, Deserialize)]
struct GameFile {
    format: String,
    version: u32,
    players: usize,
    strategies: Vec<usize>,
    /// Informational; recomputed on write and ignored on read.
    #[serde(default)]
    payoff_range: Option<[String; 2]>,
    #[serde(flatten)]
    body: GameBody,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
enum GameBody {
    /// `payoffs[i]` rows are player i's strategies; columns are opponent
    /// profiles with the lowest-numbered opponent most significant.
    Normal { payoffs: Vec<Vec<Vec<String>>> },
    Polymatrix {
        roles: Vec<RoleEntry>,
        edges: Vec<EdgeEntry>,
    },
    Bimatrix {
        a: SparseEntry,
        b: SparseEntry,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        blocks: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<String>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct RoleEntry {
    role: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeEntry {
    from: usize,
    to: usize,
    matrix: Vec<Vec<String>>,
}

/// Entries equal to `default` are omitted; the rest are `[row, col, value]`.
#[derive(Debug, Serialize, Deserialize)]
struct SparseEntry {
    rows: usize,
    cols: usize,
    default: String,
    entries: Vec<(usize, usize, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProfileFile {
    format: String,
    version: u32,
    strategies: Vec<Vec<String>>,
}

/// A reduction mapping together with the parameters it was derived with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingFile {
    pub format: String,
    pub version: u32,
    pub mapping: GameMapping,
    pub params: ReductionParams,
}

impl MappingFile {
    pub fn new(mapping: GameMapping, params: ReductionParams) -> Self {
        MappingFile {
            format: MAPPING_FORMAT.into(),
            version: FORMAT_VERSION,
            mapping,
            params,
        }
    }
}

fn dense_out(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(format).collect()).collect()
}

fn dense_in(rows: &[Vec<String>]) -> Result<Matrix> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|v| parse(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
    )
}

fn sparse_out(m: &SparseMatrix) -> SparseEntry {
    SparseEntry {
        rows: m.rows(),
        cols: m.cols(),
        default: format(m.default_value()),
        entries: m.explicit_entries().map(|(r, c, v)| (r, c, format(v))).collect(),
    }
}

fn sparse_in(e: &SparseEntry) -> Result<SparseMatrix> {
    let mut m = SparseMatrix::new(e.rows, e.cols, parse(&e.default)?);
    for (r, c, v) in &e.entries {
        if *r >= e.rows || *c >= e.cols {
            return Err(Error::Parse(format!("sparse entry ({r}, {c}) outside {}x{}", e.rows, e.cols)));
        }
        m.set(*r, *c, parse(v)?);
    }
    Ok(m)
}

fn payoff_range(game: &AnyGame) -> [String; 2] {
    let (lo, hi) = match game {
        AnyGame::Normal(_) => (Rational::from_integer(0.into()), Rational::from_integer(1.into())),
        AnyGame::Polymatrix(_) => (PolymatrixGame::payoff_low(), PolymatrixGame::payoff_high()),
        AnyGame::Bimatrix(g) => {
            let (a0, a1) = g.a().min_max().expect("bimatrix games are non-empty");
            let (b0, b1) = g.b().min_max().expect("bimatrix games are non-empty");
            (a0.min(b0), a1.max(b1))
        }
    };
    [format(&lo), format(&hi)]
}

pub fn game_to_json(game: &AnyGame) -> Result<String> {
    let body = match game {
        AnyGame::Normal(g) => GameBody::Normal {
            payoffs: (0..g.num_players()).map(|i| dense_out(g.payoff_matrix(i))).collect(),
        },
        AnyGame::Polymatrix(g) => GameBody::Polymatrix {
            roles: g
                .roles()
                .iter()
                .map(|r| RoleEntry {
                    role: r.role.as_str().into(),
                    provenance: r.provenance.clone(),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|(&(from, to), m)| EdgeEntry {
                    from,
                    to,
                    matrix: dense_out(m),
                })
                .collect(),
        },
        AnyGame::Bimatrix(g) => GameBody::Bimatrix {
            a: sparse_out(g.a()),
            b: sparse_out(g.b()),
            blocks: g.blocks().map(<[usize]>::to_vec),
            alpha: g.alpha().map(format),
        },
    };
    let file = GameFile {
        format: GAME_FORMAT.into(),
        version: FORMAT_VERSION,
        players: game.num_players(),
        strategies: game.strategy_counts().to_vec(),
        payoff_range: Some(payoff_range(game)),
        body,
    };
    serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))
}

fn check_header(format: &str, expected: &str, version: u32) -> Result<()> {
    if format != expected {
        return Err(Error::Parse(format!("expected a {expected} file, found {format:?}")));
    }
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported format version {version}")));
    }
    Ok(())
}

pub fn game_from_json(text: &str) -> Result<AnyGame> {
    let file: GameFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    check_header(&file.format, GAME_FORMAT, file.version)?;
    if file.strategies.len() != file.players {
        return Err(Error::Parse(format!(
            "{} players but {} strategy counts",
            file.players,
            file.strategies.len()
        )));
    }
    let game = match file.body {
        GameBody::Normal { payoffs } => AnyGame::Normal(NormalFormGame::new(
            file.strategies.clone(),
            payoffs.iter().map(|m| dense_in(m)).collect::<Result<_>>()?,
        )?),
        GameBody::Polymatrix { roles, edges } => {
            let roles = roles
                .into_iter()
                .map(|r| {
                    Ok(PlayerRole {
                        role: Role::parse(&r.role)?,
                        provenance: r.provenance,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut map = BTreeMap::new();
            for e in edges {
                if map.insert((e.from, e.to), dense_in(&e.matrix)?).is_some() {
                    return Err(Error::Parse(format!("edge ({}, {}) listed twice", e.from, e.to)));
                }
            }
            AnyGame::Polymatrix(PolymatrixGame::new(file.strategies.clone(), map, roles)?)
        }
        GameBody::Bimatrix { a, b, blocks, alpha } => {
            let mut g = BimatrixGame::new(sparse_in(&a)?, sparse_in(&b)?)?;
            if let Some(blocks) = blocks {
                g = g.with_blocks(blocks, alpha.as_deref().map(parse).transpose()?)?;
            }
            AnyGame::Bimatrix(g)
        }
    };
    if game.strategy_counts() != file.strategies.as_slice() {
        return Err(Error::Parse("strategy counts do not match the payoffs".into()));
    }
    Ok(game)
}

pub fn profile_to_json(profile: &MixedProfile) -> Result<String> {
    let file = ProfileFile {
        format: PROFILE_FORMAT.into(),
        version: FORMAT_VERSION,
        strategies: profile
            .strategies()
            .iter()
            .map(|s| s.probs().iter().map(format).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&file).map_err(|e| Error::Parse(e.to_string()))
}

pub fn profile_from_json(text: &str) -> Result<MixedProfile> {
    let file: ProfileFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    check_header(&file.format, PROFILE_FORMAT, file.version)?;
    let strategies = file
        .strategies
        .iter()
        .map(|s| MixedStrategy::new(s.iter().map(|v| parse(v)).collect::<Result<_>>()?))
        .collect::<Result<Vec<_>>>()?;
    Ok(MixedProfile::new(strategies))
}

pub fn mapping_to_json(file: &MappingFile) -> Result<String> {
    serde_json::to_string_pretty(file).map_err(|e| Error::Parse(e.to_string()))
}

pub fn mapping_from_json(text: &str) -> Result<MappingFile> {
    let file: MappingFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    check_header(&file.format, MAPPING_FORMAT, file.version)?;
    file.mapping.validate()?;
    Ok(file)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text.as_bytes().iter().chain(b"\n").copied().collect::<Vec<u8>>())
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_game(path: &Path) -> Result<AnyGame> {
    game_from_json(&read(path)?)
}

pub fn write_game(path: &Path, game: &AnyGame) -> Result<()> {
    write(path, &game_to_json(game)?)
}

pub fn read_profile(path: &Path) -> Result<MixedProfile> {
    profile_from_json(&read(path)?)
}

pub fn write_profile(path: &Path, profile: &MixedProfile) -> Result<()> {
    write(path, &profile_to_json(profile)?)
}

pub fn read_mapping(path: &Path) -> Result<MappingFile> {
    mapping_from_json(&read(path)?)
}

pub fn write_mapping(path: &Path, file: &MappingFile) -> Result<()> {
    write(path, &mapping_to_json(file)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn normal_round_trip() {
        let g = NormalFormGame::from_fn(vec![2, 3, 2], |i, s| ratio((i + s[0] + 2 * s[1] + s[2]) as i64 % 5, 4)).unwrap();
        let g = AnyGame::Normal(g);
        let text = game_to_json(&g).unwrap();
        assert!(text.contains("\"class\": \"normal\""));
        assert_eq!(game_from_json(&text).unwrap(), g);
    }

    #[test]
    fn bimatrix_round_trip_keeps_blocks() {
        let mut a = SparseMatrix::new(3, 3, ratio(1, 3));
        a.set(0, 2, int(-5));
        let g = BimatrixGame::new(a, SparseMatrix::identity(3))
            .unwrap()
            .with_blocks(vec![1, 2], Some(int(5)))
            .unwrap();
        let g = AnyGame::Bimatrix(g);
        let text = game_to_json(&g).unwrap();
        assert_eq!(game_from_json(&text).unwrap(), g);
    }

    #[test]
    fn rejects_bad_rationals_and_headers() {
        let g = AnyGame::Normal(NormalFormGame::from_fn(vec![2, 2], |_, _| ratio(1, 2)).unwrap());
        let text = game_to_json(&g).unwrap();
        let broken = text.replacen("1/2", "1/0", 1);
        assert!(matches!(game_from_json(&broken), Err(Error::Parse(_))));
        let wrong = text.replace(GAME_FORMAT, "something-else");
        assert!(matches!(game_from_json(&wrong), Err(Error::Parse(_))));
        assert!(matches!(game_from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn profile_round_trip() {
        let p = MixedProfile::new(vec![
            MixedStrategy::new(vec![ratio(1, 3), ratio(2, 3)]).unwrap(),
            MixedStrategy::pure(3, 2),
        ]);
        assert_eq!(profile_from_json(&profile_to_json(&p).unwrap()).unwrap(), p);
        assert!(profile_from_json(&profile_to_json(&p).unwrap().replace("2/3", "3/4")).is_err());
    }
}
