//! Profile arguments: `Confess,Silent`, `1/2:1/2,Defect`, or `#2`.

use cgg_core::game::Game;
use cgg_core::profile::{point_mass, MixedProfile};
use cgg_core::rational::parse_rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileArg {
    /// Position in an ordered equilibrium list.
    Index(usize),
    Profile(MixedProfile),
}

pub fn parse_profile(g: &Game, text: &str) -> Result<ProfileArg, String> {
    if let Some(i) = text.strip_prefix('#') {
        return i
            .parse()
            .map(ProfileArg::Index)
            .map_err(|_| format!("bad equilibrium index {text:?}"));
    }
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != g.num_players() {
        return Err(format!(
            "profile {text:?} has {} components for {} players",
            parts.len(),
            g.num_players()
        ));
    }
    let vectors = parts
        .iter()
        .enumerate()
        .map(|(k, part)| {
            let count = g.shape()[k];
            if part.contains(':') || part.contains('/') || part.parse::<f64>().is_ok() && !is_strategy(g, k, part) {
                let probs = part
                    .split(':')
                    .map(|x| parse_rational(x.trim()).map_err(|e| e.to_string()))
                    .collect::<Result<Vec<_>, _>>()?;
                if probs.len() != count {
                    return Err(format!(
                        "player {} has {count} strategies but {part:?} gives {}",
                        g.players()[k],
                        probs.len()
                    ));
                }
                Ok(probs)
            } else {
                let s = g.strategy_index(k, part).map_err(|e| e.to_string())?;
                Ok(point_mass(count, s))
            }
        })
        .collect::<Result<Vec<_>, String>>()?;
    MixedProfile::new(vectors)
        .map(ProfileArg::Profile)
        .map_err(|e| e.to_string())
}

fn is_strategy(g: &Game, k: usize, name: &str) -> bool {
    g.strategies(k).iter().any(|s| s == name)
}
