use serde::Serialize;
use serde_json::{json, Value};

use super::{flow, is_determined, possible_sinks, FlowEnd, GameError, Goal, Knowledge};
use crate::graph::{EdgeIx, Graph, VertexIx};
use crate::strategies::{Adversary, AdversaryResponse, Questioner};

/// Matches stop with an error after this many rounds.
pub const DEFAULT_ROUND_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    pub questions: Vec<VertexIx>,
    pub answers: Vec<(VertexIx, EdgeIx)>,
    pub volunteered: Vec<(VertexIx, EdgeIx)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Sink(VertexIx),
    /// Flow vertices; a cyclic flow repeats the vertex it closes on.
    Path(Vec<VertexIx>),
}

#[derive(Debug, Clone)]
pub struct MatchResult {
    pub rounds: usize,
    pub transcript: Vec<RoundRecord>,
    pub outcome: Outcome,
    pub knowledge: Knowledge,
}

#[derive(Serialize)]
struct RoundDoc {
    round: usize,
    questions: Vec<String>,
    answers: Vec<[String; 2]>,
    volunteered: Vec<[String; 2]>,
}

impl MatchResult {
    pub fn to_value(&self, g: &Graph) -> Value {
        let pairs = |xs: &[(VertexIx, EdgeIx)]| -> Vec<[String; 2]> {
            xs.iter().map(|&(v, e)| [g.id(v).to_string(), g.edge_id(e).to_string()]).collect()
        };
        let transcript: Vec<RoundDoc> = self
            .transcript
            .iter()
            .map(|r| RoundDoc {
                round: r.round,
                questions: r.questions.iter().map(|&v| g.id(v).to_string()).collect(),
                answers: pairs(&r.answers),
                volunteered: pairs(&r.volunteered),
            })
            .collect();
        let outcome = match &self.outcome {
            Outcome::Sink(v) => json!({ "sink": g.id(*v) }),
            Outcome::Path(vs) => json!({ "path": vs.iter().map(|&v| g.id(v)).collect::<Vec<_>>() }),
        };
        json!({ "rounds": self.rounds, "transcript": transcript, "outcome": outcome })
    }

    pub fn to_json(&self, g: &Graph) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value(g)).unwrap();
        s.push('\n');
        s
    }

    /// Every switch revealed during the match, in the order revealed.
    pub fn revealed(&self) -> Vec<(VertexIx, EdgeIx)> {
        self.transcript.iter().flat_map(|r| r.answers.iter().chain(&r.volunteered).copied()).collect()
    }
}

pub(crate) fn check_questions(g: &Graph, k: usize, qs: &[VertexIx]) -> Result<(), GameError> {
    if qs.len() > k {
        return Err(GameError::TooManyQuestions { asked: qs.len(), k });
    }
    let mut seen = vec![false; g.vertex_count()];
    for &v in qs {
        if v >= g.vertex_count() {
            return Err(GameError::AskedUnknownVertex(v));
        }
        if g.is_sink(v) {
            return Err(GameError::AskedSink(g.id(v).to_string()));
        }
        if g.out_degree(v) == 1 {
            return Err(GameError::AskedForced(g.id(v).to_string()));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(GameError::DuplicateQuestion(g.id(v).to_string()));
        }
    }
    Ok(())
}

/// Checks a response against the asked set and folds it into `know`.
pub(crate) fn apply_response(
    g: &Graph,
    know: &mut Knowledge,
    asked: &[VertexIx],
    resp: &AdversaryResponse,
) -> Result<(), GameError> {
    let mut answered = vec![false; g.vertex_count()];
    let mut is_asked = vec![false; g.vertex_count()];
    for &v in asked {
        is_asked[v] = true;
    }
    for &(v, e) in &resp.answers {
        if v >= g.vertex_count() || !is_asked[v] {
            let id = if v < g.vertex_count() { g.id(v).to_string() } else { format!("#{v}") };
            return Err(GameError::UnaskedAnswer(id));
        }
        if std::mem::replace(&mut answered[v], true) {
            return Err(GameError::DuplicateAnswer(g.id(v).to_string()));
        }
        know.reveal(g, v, e)?;
    }
    if let Some(&v) = asked.iter().find(|&&v| !answered[v]) {
        return Err(GameError::MissingAnswer(g.id(v).to_string()));
    }
    for &(v, e) in &resp.volunteered {
        if v >= g.vertex_count() {
            return Err(GameError::AskedUnknownVertex(v));
        }
        know.reveal(g, v, e)?;
    }
    Ok(())
}

pub(crate) fn outcome(g: &Graph, know: &Knowledge, goal: Goal) -> Outcome {
    match goal {
        Goal::Sink if g.is_acyclic() => Outcome::Sink(possible_sinks(g, know)[0]),
        _ => {
            let f = flow(g, know);
            let mut vs = f.vertices.clone();
            if f.end == FlowEnd::Cycle {
                vs.push(g.head(*f.edges.last().unwrap()));
            }
            Outcome::Path(vs)
        }
    }
}

/// Plays `q` against `a` until the goal is determined.
pub fn run_match(
    g: &Graph,
    k: usize,
    q: &mut dyn Questioner,
    a: &mut dyn Adversary,
    goal: Goal,
) -> Result<MatchResult, GameError> {
    run_match_from(g, k, q, a, goal, Knowledge::new(g), DEFAULT_ROUND_CAP)
}

pub fn run_match_from(
    g: &Graph,
    k: usize,
    q: &mut dyn Questioner,
    a: &mut dyn Adversary,
    goal: Goal,
    start: Knowledge,
    round_cap: usize,
) -> Result<MatchResult, GameError> {
    if k == 0 {
        return Err(GameError::Unsupported("k must be at least 1".into()));
    }
    if goal == Goal::Sink && !g.is_acyclic() {
        return Err(GameError::Unsupported("sink search on cyclic graphs".into()));
    }
    q.prepare(g, k)?;
    a.prepare(g, k)?;
    let mut know = start;
    let mut transcript = Vec::new();
    while !is_determined(g, &know, goal) {
        if transcript.len() == round_cap {
            return Err(GameError::RoundLimit(round_cap));
        }
        let questions = q.ask(g, k, &know)?;
        check_questions(g, k, &questions)?;
        if questions.is_empty() {
            return Err(GameError::NoQuestions(q.name()));
        }
        let resp = a.respond(g, &know, &questions)?;
        apply_response(g, &mut know, &questions, &resp)?;
        transcript.push(RoundRecord {
            round: transcript.len() + 1,
            questions,
            answers: resp.answers,
            volunteered: resp.volunteered,
        });
    }
    Ok(MatchResult { rounds: transcript.len(), outcome: outcome(g, &know, goal), transcript, knowledge: know })
}
