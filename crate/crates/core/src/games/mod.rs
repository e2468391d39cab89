//! Two-player turn-based games derived from a CGS and a coalition.
//!
//! From a state `s` Player 1 (the coalition) picks a coalition vector `v1`
//! and the game moves to the intermediate node `(s, v1)`; Player 2 then picks
//! an opponent vector `v2` and the game moves to `δ(s, v1 ⊕ v2)`. Winning
//! conditions only look at the state nodes, i.e. at even positions of plays.
//!
//! Nodes `0..n` are the states, node `n + s * a1 + v1` is `(s, v1)`.

use std::collections::VecDeque;
use std::fmt::{self, Write};

use thiserror::Error;

use crate::cgs::{Cgs, StateId, StateSet};
use crate::syntax::AgentSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("unknown agent `{0}` in coalition")]
    UnknownAgent(String),
    #[error("state `{0}` is not in the winning region")]
    NotWinning(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::One => "player 1",
            Player::Two => "player 2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Objective {
    /// The next state is in the target.
    Next,
    /// Some state is in the target.
    Reach,
    /// Every state is in the target.
    Safety,
    /// Infinitely many states are in the target.
    Buchi,
    /// All but finitely many states are in the target.
    CoBuchi,
}

impl Objective {
    pub const ALL: [Objective; 5] = [
        Objective::Next,
        Objective::Reach,
        Objective::Safety,
        Objective::Buchi,
        Objective::CoBuchi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Objective::Next => "next",
            Objective::Reach => "reach",
            Objective::Safety => "safety",
            Objective::Buchi => "buchi",
            Objective::CoBuchi => "cobuchi",
        }
    }

    /// The objective whose plays are exactly the plays violating this one,
    /// when applied to the complemented target.
    pub fn dual(self) -> Objective {
        match self {
            Objective::Next => Objective::Next,
            Objective::Reach => Objective::Safety,
            Objective::Safety => Objective::Reach,
            Objective::Buchi => Objective::CoBuchi,
            Objective::CoBuchi => Objective::Buchi,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinningCondition {
    pub objective: Objective,
    pub target: StateSet,
}

impl WinningCondition {
    pub fn new(objective: Objective, target: StateSet) -> Self {
        WinningCondition { objective, target }
    }

    /// Complement condition: a play satisfies it iff it violates `self`.
    pub fn dual(&self) -> WinningCondition {
        WinningCondition {
            objective: self.objective.dual(),
            target: self.target.complement(),
        }
    }
}

/// States from which `player` wins a condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinningRegion {
    pub player: Player,
    pub objective: Objective,
    pub states: StateSet,
}

/// Positional strategy of one player, given as a move index for each of its
/// nodes that lies in the winning region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalStrategy {
    pub player: Player,
    pub region: StateSet,
    choices: Vec<Option<usize>>,
}

impl PositionalStrategy {
    /// Move chosen at a node, if the node belongs to the player and is
    /// covered by the strategy.
    pub fn choice(&self, node: usize) -> Option<usize> {
        self.choices.get(node).copied().flatten()
    }

    /// Coalition vector played in state `s` by a Player 1 strategy.
    pub fn coalition_move(&self, game: &Game<'_>, s: StateId) -> Result<usize, GameError> {
        match self.choices.get(s.0).copied().flatten() {
            Some(v1) if self.player == Player::One && self.region.contains(s) => Ok(v1),
            _ => Err(GameError::NotWinning(game.cgs.state_name(s).to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Attractor {
    pub nodes: Vec<bool>,
    /// Number of rounds needed to force the target; `u32::MAX` outside.
    pub rank: Vec<u32>,
}

/// The turn-based game `S_A` for a coalition `A`.
#[derive(Debug, Clone)]
pub struct Game<'a> {
    cgs: &'a Cgs,
    coalition: Vec<usize>,
    opponents: Vec<usize>,
    n: usize,
    a1: usize,
    a2: usize,
    /// `δ(s, v1 ⊕ v2)` at `(s * a1 + v1) * a2 + v2`.
    succ2: Vec<u32>,
    pred_start: Vec<usize>,
    preds: Vec<u32>,
}

fn partial_codes(agents: &[usize], base: usize) -> Vec<usize> {
    let count = base.pow(agents.len() as u32);
    (0..count)
        .map(|mut v| {
            let mut code = 0;
            for &agent in agents {
                code += (v % base) * base.pow(agent as u32);
                v /= base;
            }
            code
        })
        .collect()
}

impl<'a> Game<'a> {
    pub fn new(cgs: &'a Cgs, coalition: &AgentSet) -> Result<Self, GameError> {
        let mut members = Vec::new();
        for name in coalition.iter() {
            members.push(cgs.agent_index(name).map_err(|_| GameError::UnknownAgent(name.to_string()))?);
        }
        members.sort_unstable();
        let opponents: Vec<usize> = (0..cgs.num_agents()).filter(|a| !members.contains(a)).collect();
        let base = cgs.num_actions().max(1);
        let codes1 = partial_codes(&members, base);
        let codes2 = partial_codes(&opponents, base);
        let (n, a1, a2) = (cgs.num_states(), codes1.len(), codes2.len());

        let mut succ2 = Vec::with_capacity(n * a1 * a2);
        for s in cgs.states() {
            for c1 in &codes1 {
                for c2 in &codes2 {
                    succ2.push(cgs.transition(s, c1 + c2).0 as u32);
                }
            }
        }

        let total = n + n * a1;
        let mut pred_count = vec![0usize; total + 1];
        for s in 0..n {
            for v1 in 0..a1 {
                pred_count[n + s * a1 + v1] += 1;
            }
        }
        for &t in &succ2 {
            pred_count[t as usize] += 1;
        }
        let mut pred_start = Vec::with_capacity(total + 1);
        let mut acc = 0;
        for c in &pred_count[..total] {
            pred_start.push(acc);
            acc += c;
        }
        pred_start.push(acc);
        let mut fill = pred_start.clone();
        let mut preds = vec![0u32; acc];
        for s in 0..n {
            for v1 in 0..a1 {
                let mid = n + s * a1 + v1;
                preds[fill[mid]] = s as u32;
                fill[mid] += 1;
            }
        }
        for (x, &t) in succ2.iter().enumerate() {
            let mid = n + x / a2;
            preds[fill[t as usize]] = mid as u32;
            fill[t as usize] += 1;
        }

        Ok(Game {
            cgs,
            coalition: members,
            opponents,
            n,
            a1,
            a2,
            succ2,
            pred_start,
            preds,
        })
    }

    pub fn cgs(&self) -> &'a Cgs {
        self.cgs
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn num_nodes(&self) -> usize {
        self.n + self.n * self.a1
    }

    /// `|Ac1|`, the number of coalition vectors.
    pub fn coalition_moves(&self) -> usize {
        self.a1
    }

    /// `|Ac2|`, the number of opponent vectors.
    pub fn opponent_moves(&self) -> usize {
        self.a2
    }

    pub fn owner(&self, node: usize) -> Player {
        if node < self.n {
            Player::One
        } else {
            Player::Two
        }
    }

    pub fn num_moves(&self, node: usize) -> usize {
        if node < self.n {
            self.a1
        } else {
            self.a2
        }
    }

    pub fn successor(&self, node: usize, mv: usize) -> usize {
        if node < self.n {
            self.n + node * self.a1 + mv
        } else {
            self.succ2[(node - self.n) * self.a2 + mv] as usize
        }
    }

    /// The state `s` of node `s` or `(s, v1)`.
    pub fn state_of(&self, node: usize) -> StateId {
        if node < self.n {
            StateId(node)
        } else {
            StateId((node - self.n) / self.a1)
        }
    }

    pub fn intermediate(&self, s: StateId, v1: usize) -> usize {
        self.n + s.0 * self.a1 + v1
    }

    /// `δ(s, v1 ⊕ v2)`.
    pub fn step(&self, s: StateId, v1: usize, v2: usize) -> StateId {
        StateId(self.succ2[(s.0 * self.a1 + v1) * self.a2 + v2] as usize)
    }

    fn predecessors(&self, node: usize) -> &[u32] {
        &self.preds[self.pred_start[node]..self.pred_start[node + 1]]
    }

    fn decode(&self, agents: &[usize], mut v: usize) -> Vec<(usize, usize)> {
        let base = self.cgs.num_actions().max(1);
        agents
            .iter()
            .map(|&a| {
                let d = v % base;
                v /= base;
                (a, d)
            })
            .collect()
    }

    /// `(agent, action)` pairs of a coalition vector.
    pub fn coalition_profile(&self, v1: usize) -> Vec<(usize, usize)> {
        self.decode(&self.coalition, v1)
    }

    /// `(agent, action)` pairs of an opponent vector.
    pub fn opponent_profile(&self, v2: usize) -> Vec<(usize, usize)> {
        self.decode(&self.opponents, v2)
    }

    pub fn coalition_text(&self, v1: usize) -> String {
        profile_text(self.cgs, &self.coalition_profile(v1))
    }

    pub fn opponent_text(&self, v2: usize) -> String {
        profile_text(self.cgs, &self.opponent_profile(v2))
    }

    fn state_nodes(&self, set: &StateSet) -> Vec<bool> {
        let mut nodes = vec![false; self.num_nodes()];
        for s in set.iter() {
            nodes[s.0] = true;
        }
        nodes
    }

    fn project(&self, nodes: &[bool]) -> StateSet {
        StateSet::from_fn(self.n, |s| nodes[s.0])
    }

    /// Nodes from which `player` can force a visit to `target`. Nodes in
    /// `blocked` never join, so they act as escapes for the other player.
    pub fn attractor(&self, target: &[bool], player: Player, blocked: Option<&[bool]>) -> Attractor {
        let total = self.num_nodes();
        let is_blocked = |u: usize| blocked.is_some_and(|b| b[u]);
        let mut nodes = vec![false; total];
        let mut rank = vec![u32::MAX; total];
        let mut queue = VecDeque::new();
        for u in 0..total {
            if target[u] && !is_blocked(u) {
                nodes[u] = true;
                rank[u] = 0;
                queue.push_back(u);
            }
        }
        let mut remaining: Vec<usize> = (0..total).map(|u| self.num_moves(u)).collect();
        while let Some(w) = queue.pop_front() {
            for &p in self.predecessors(w) {
                let p = p as usize;
                if nodes[p] || is_blocked(p) {
                    continue;
                }
                let forced = if self.owner(p) == player {
                    true
                } else {
                    remaining[p] -= 1;
                    remaining[p] == 0
                };
                if forced {
                    nodes[p] = true;
                    rank[p] = rank[w] + 1;
                    queue.push_back(p);
                }
            }
        }
        Attractor { nodes, rank }
    }

    /// One round: `player` can force the next state into `target`.
    fn next_nodes(&self, target: &[bool], player: Player) -> Vec<bool> {
        let mut good = vec![false; self.num_nodes()];
        for u in self.n..self.num_nodes() {
            let mut succ = (0..self.a2).map(|m| target[self.successor(u, m)]);
            good[u] = if self.owner(u) == player {
                succ.any(|b| b)
            } else {
                succ.all(|b| b)
            };
        }
        for s in 0..self.n {
            let mut succ = (0..self.a1).map(|m| good[self.successor(s, m)]);
            good[s] = if self.owner(s) == player {
                succ.any(|b| b)
            } else {
                succ.all(|b| b)
            };
        }
        good
    }

    fn safety_nodes(&self, target: &[bool], player: Player) -> Vec<bool> {
        // odd positions are unconstrained
        let bad: Vec<bool> = (0..self.num_nodes()).map(|u| u < self.n && !target[u]).collect();
        let lost = self.attractor(&bad, player.opponent(), None);
        lost.nodes.iter().map(|b| !b).collect()
    }

    /// Returns the winning nodes and the final attractor to the target
    /// inside them.
    fn buchi_nodes(&self, target: &[bool], player: Player) -> (Vec<bool>, Attractor) {
        let total = self.num_nodes();
        let mut lost = vec![false; total];
        loop {
            let goal: Vec<bool> = (0..total).map(|u| u < self.n && target[u] && !lost[u]).collect();
            let reach = self.attractor(&goal, player, Some(&lost));
            let escape: Vec<bool> = reach.nodes.iter().map(|b| !b).collect();
            let next_lost = self.attractor(&escape, player.opponent(), None).nodes;
            if next_lost == lost {
                return (lost.iter().map(|b| !b).collect(), reach);
            }
            lost = next_lost;
        }
    }

    /// Least fixpoint over levels: at each level the player either stays in
    /// the target forever or drops to a lower level. Returns the winning
    /// nodes and a positional strategy for them.
    fn cobuchi_nodes(&self, target: &[bool], player: Player) -> (Vec<bool>, Vec<Option<usize>>) {
        let total = self.num_nodes();
        let mut won = vec![false; total];
        let mut choices = vec![None; total];
        loop {
            // nodes from which the opponent forces a bad state before `won`
            let bad: Vec<bool> = (0..total).map(|u| u < self.n && !target[u] && !won[u]).collect();
            let spoil = self.attractor(&bad, player.opponent(), Some(&won));
            let stay: Vec<bool> = (0..total).map(|u| !spoil.nodes[u]).collect();
            let attr = self.attractor(&stay, player, None);
            for u in 0..total {
                if won[u] || !attr.nodes[u] || self.owner(u) != player {
                    continue;
                }
                choices[u] = if attr.rank[u] == 0 {
                    (0..self.num_moves(u)).find(|&m| stay[self.successor(u, m)])
                } else {
                    (0..self.num_moves(u)).find(|&m| attr.rank[self.successor(u, m)] < attr.rank[u])
                };
            }
            if attr.nodes == won {
                return (won, choices);
            }
            won = attr.nodes;
        }
    }

    fn winning_nodes(&self, cond: &WinningCondition, player: Player) -> Vec<bool> {
        let target = self.state_nodes(&cond.target);
        match cond.objective {
            Objective::Next => self.next_nodes(&target, player),
            Objective::Reach => {
                let goal: Vec<bool> = (0..self.num_nodes()).map(|u| u < self.n && target[u]).collect();
                self.attractor(&goal, player, None).nodes
            }
            Objective::Safety => self.safety_nodes(&target, player),
            Objective::Buchi => self.buchi_nodes(&target, player).0,
            Objective::CoBuchi => {
                // determinacy: the opponent's Büchi region on the complement
                let rest: Vec<bool> = (0..self.num_nodes()).map(|u| u < self.n && !target[u]).collect();
                let (opp, _) = self.buchi_nodes(&rest, player.opponent());
                let win: Vec<bool> = opp.iter().map(|b| !b).collect();
                debug_assert_eq!(win, self.cobuchi_nodes(&target, player).0);
                win
            }
        }
    }

    /// Winning region of Player 1.
    pub fn solve(&self, cond: &WinningCondition) -> WinningRegion {
        self.solve_for(cond, Player::One)
    }

    pub fn solve_for(&self, cond: &WinningCondition, player: Player) -> WinningRegion {
        WinningRegion {
            player,
            objective: cond.objective,
            states: self.project(&self.winning_nodes(cond, player)),
        }
    }

    /// A positional winning strategy on the winning region. Where several
    /// moves qualify the least one is taken; for attractors that is the least
    /// move decreasing the rank.
    pub fn strategy(&self, cond: &WinningCondition, player: Player) -> PositionalStrategy {
        let total = self.num_nodes();
        let target = self.state_nodes(&cond.target);
        let owned = |u: usize| self.owner(u) == player;
        let first = |u: usize, ok: &dyn Fn(usize) -> bool| (0..self.num_moves(u)).find(|&m| ok(self.successor(u, m)));
        let mut choices = vec![None; total];
        let region;
        match cond.objective {
            Objective::Next => {
                let good = self.next_nodes(&target, player);
                for u in (0..total).filter(|&u| good[u] && owned(u)) {
                    choices[u] = if u < self.n {
                        first(u, &|w| good[w])
                    } else {
                        first(u, &|w| target[w])
                    };
                }
                region = good;
            }
            Objective::Reach => {
                let goal: Vec<bool> = (0..total).map(|u| u < self.n && target[u]).collect();
                let attr = self.attractor(&goal, player, None);
                for u in (0..total).filter(|&u| attr.nodes[u] && owned(u)) {
                    choices[u] = if attr.rank[u] == 0 {
                        Some(0)
                    } else {
                        first(u, &|w| attr.rank[w] < attr.rank[u])
                    };
                }
                region = attr.nodes;
            }
            Objective::Safety => {
                let safe = self.safety_nodes(&target, player);
                for u in (0..total).filter(|&u| safe[u] && owned(u)) {
                    choices[u] = first(u, &|w| safe[w]);
                }
                region = safe;
            }
            Objective::Buchi => {
                let (win, attr) = self.buchi_nodes(&target, player);
                for u in (0..total).filter(|&u| win[u] && owned(u)) {
                    choices[u] = if attr.rank[u] == 0 {
                        first(u, &|w| win[w])
                    } else {
                        first(u, &|w| attr.rank[w] < attr.rank[u])
                    };
                }
                region = win;
            }
            Objective::CoBuchi => {
                let (win, c) = self.cobuchi_nodes(&target, player);
                choices = c;
                region = win;
            }
        }
        PositionalStrategy {
            player,
            region: self.project(&region),
            choices,
        }
    }

    /// The game graph as a Kripke structure in the model text format.
    /// Intermediate nodes are named `state.actions`, with the coalition's
    /// actions in agent order. Nodes are labeled `player1` or `player2`, and
    /// each `(name, region)` pair adds a proposition holding on the region.
    pub fn dump(&self, regions: &[(&str, &StateSet)]) -> String {
        let names: Vec<&str> = self.coalition.iter().map(|&a| self.cgs.agent_names()[a].as_str()).collect();
        let mid_name = |s: StateId, v1: usize| {
            let acts: Vec<&str> = self
                .coalition_profile(v1)
                .iter()
                .map(|&(_, act)| self.cgs.action_names()[act].as_str())
                .collect();
            format!("{}.{}", self.cgs.state_name(s), if acts.is_empty() { "-".to_string() } else { acts.join(".") })
        };
        let mut out = String::new();
        let _ = writeln!(out, "# game for coalition {{{}}}", names.join(","));
        let _ = writeln!(out, "kind = kripke");
        let mut states: Vec<String> = self.cgs.state_names().to_vec();
        for s in self.cgs.states() {
            states.extend((0..self.a1).map(|v1| mid_name(s, v1)));
        }
        let _ = writeln!(out, "states = {}", states.join(" "));
        let _ = writeln!(out, "initial = {}", self.cgs.state_names().join(" "));
        let mut props = vec!["player1", "player2"];
        props.extend(regions.iter().map(|(name, _)| *name));
        let _ = writeln!(out, "propositions = {}", props.join(" "));
        let _ = writeln!(out, "\n[labels]");
        for s in self.cgs.states() {
            let mut labels = vec!["player1"];
            labels.extend(regions.iter().filter(|(_, r)| r.contains(s)).map(|(name, _)| *name));
            let _ = writeln!(out, "{} = {}", self.cgs.state_name(s), labels.join(" "));
            for v1 in 0..self.a1 {
                let _ = writeln!(out, "{} = player2", mid_name(s, v1));
            }
        }
        let _ = writeln!(out, "\n[transitions]");
        for s in self.cgs.states() {
            let mids: Vec<String> = (0..self.a1).map(|v1| mid_name(s, v1)).collect();
            let _ = writeln!(out, "{} -> {}", self.cgs.state_name(s), mids.join(" "));
            for v1 in 0..self.a1 {
                let mut targets: Vec<StateId> = (0..self.a2).map(|v2| self.step(s, v1, v2)).collect();
                targets.sort_unstable();
                targets.dedup();
                let targets: Vec<&str> = targets.iter().map(|&t| self.cgs.state_name(t)).collect();
                let _ = writeln!(out, "{} -> {}", mid_name(s, v1), targets.join(" "));
            }
        }
        out
    }
}

fn profile_text(cgs: &Cgs, profile: &[(usize, usize)]) -> String {
    profile
        .iter()
        .map(|&(a, act)| format!("{}={}", cgs.agent_names()[a], cgs.action_names()[act]))
        .collect::<Vec<_>>()
        .join(",")
}
