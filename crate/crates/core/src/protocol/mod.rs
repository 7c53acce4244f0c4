//! Bit-metered two-party protocols.
//!
//! Alice holds the women's preference profile and Bob holds the men's. Each
//! party runs on its own thread and only ever receives its own profile, the
//! messages addressed to it and a public coin stream; everything else has
//! to travel through the metered wire.
//!
//! The wire is half-duplex: one party holds the floor and may send, and the
//! floor passes to the other party as soon as the holder waits on an empty
//! inbox. Transcripts are therefore a deterministic function of the inputs
//! and the seed.

mod protocols;
mod wire;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::market::{PreferenceProfile, Side};
use crate::{Error, Result};

pub use protocols::{
    ceil_log2, disj_decider, BlockingFractionEstimator, DisjDecider, FractionVerdict,
    GaleShapleyProtocol, NaiveStabilityProtocol, Verdict,
};
use wire::Wire;
pub use wire::Endpoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn side(self) -> Side {
        match self {
            Party::Alice => Side::Woman,
            Party::Bob => Side::Man,
        }
    }

    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }

    fn slot(self) -> usize {
        match self {
            Party::Alice => 0,
            Party::Bob => 1,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "A",
            Party::Bob => "B",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// `width` low bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        debug_assert!(width >= 64 || value >> width == 0, "{value} does not fit {width} bits");
        Self((0..width).rev().map(|k| value >> k & 1 == 1).collect())
    }

    pub fn to_uint(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| acc << 1 | b as u64)
    }

    pub fn push(&mut self, bit: bool) {
        self.0.push(bit);
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<bool>> for BitString {
    fn from(v: Vec<bool>) -> Self {
        Self(v)
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub sender: Party,
    pub bits: BitString,
}

/// Append-only record of everything sent over the wire.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    messages: Vec<Message>,
    total_bits: usize,
}

impl Transcript {
    fn append(&mut self, sender: Party, bits: BitString) {
        self.total_bits += bits.len();
        self.messages.push(Message { sender, bits });
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn total_bits(&self) -> usize {
        self.total_bits
    }

    pub fn bits_from(&self, party: Party) -> usize {
        self.messages
            .iter()
            .filter(|m| m.sender == party)
            .map(|m| m.bits.len())
            .sum()
    }

    /// One line per message: `A <bits>` or `B <bits>`.
    pub fn dump(&self) -> String {
        self.messages
            .iter()
            .map(|m| format!("{} {}\n", m.sender, m.bits))
            .collect()
    }
}

/// Everything a party may touch while it runs.
pub struct PartyContext<'a> {
    party: Party,
    own: &'a PreferenceProfile,
    endpoint: Endpoint<'a>,
    coins: ChaCha8Rng,
}

impl<'a> PartyContext<'a> {
    pub fn party(&self) -> Party {
        self.party
    }

    pub fn n(&self) -> usize {
        self.own.n()
    }

    /// This party's own preference profile.
    pub fn profile(&self) -> &'a PreferenceProfile {
        self.own
    }

    /// The profile of `side`, which is only available for the party's own
    /// side.
    pub fn profile_of(&self, side: Side) -> Result<&'a PreferenceProfile> {
        if side == self.party.side() {
            Ok(self.own)
        } else {
            Err(Error::Isolation(format!(
                "party {} cannot read the {side} profile",
                self.party
            )))
        }
    }

    /// Public coins: both parties see the same stream.
    pub fn coins(&mut self) -> &mut ChaCha8Rng {
        &mut self.coins
    }

    pub fn send(&mut self, bits: BitString) -> Result<()> {
        self.endpoint.send(bits)
    }

    pub fn recv(&mut self) -> Result<BitString> {
        self.endpoint.recv()
    }

    pub fn send_bit(&mut self, bit: bool) -> Result<()> {
        self.send(BitString(vec![bit]))
    }

    pub fn recv_bit(&mut self) -> Result<bool> {
        let msg = self.recv()?;
        match msg.bits() {
            &[b] => Ok(b),
            other => Err(Error::Protocol(format!("expected 1 bit, got {}", other.len()))),
        }
    }

    pub fn send_uint(&mut self, value: u64, width: usize) -> Result<()> {
        self.send(BitString::from_uint(value, width))
    }

    pub fn recv_uint(&mut self, width: usize) -> Result<u64> {
        let msg = self.recv()?;
        if msg.len() != width {
            return Err(Error::Protocol(format!("expected {width} bits, got {}", msg.len())));
        }
        Ok(msg.to_uint())
    }
}

/// A two-party protocol given as the code each party runs.
///
/// Both parties must end with the same output: outputs are common knowledge.
pub trait Protocol: Sync {
    type Output: Send + PartialEq + fmt::Debug;

    fn name(&self) -> &str;

    fn alice(&self, ctx: &mut PartyContext<'_>) -> Result<Self::Output>;

    fn bob(&self, ctx: &mut PartyContext<'_>) -> Result<Self::Output>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolRun<T> {
    pub output: T,
    pub transcript: Transcript,
    pub seed: u64,
}

impl<T> ProtocolRun<T> {
    pub fn bits(&self) -> usize {
        self.transcript.total_bits()
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> ProtocolRun<U> {
        ProtocolRun {
            output: f(self.output),
            transcript: self.transcript,
            seed: self.seed,
        }
    }
}

fn play<P: Protocol + ?Sized>(
    protocol: &P,
    party: Party,
    own: &PreferenceProfile,
    wire: &Wire,
    seed: u64,
) -> Result<P::Output> {
    let mut ctx = PartyContext {
        party,
        own,
        endpoint: wire.endpoint(party),
        coins: ChaCha8Rng::seed_from_u64(seed),
    };
    match party {
        Party::Alice => protocol.alice(&mut ctx),
        Party::Bob => protocol.bob(&mut ctx),
    }
}

/// Runs `protocol` with Alice holding `women` and Bob holding `men`.
pub fn run_two_party<P: Protocol + ?Sized>(
    protocol: &P,
    women: &PreferenceProfile,
    men: &PreferenceProfile,
    seed: u64,
) -> Result<ProtocolRun<P::Output>> {
    if women.n() != men.n() {
        return Err(Error::domain(format!(
            "profiles over different sizes {} and {}",
            women.n(),
            men.n()
        )));
    }
    let wire = Wire::new();
    let (alice, bob) = std::thread::scope(|s| {
        let a = s.spawn(|| play(protocol, Party::Alice, women, &wire, seed));
        let b = s.spawn(|| play(protocol, Party::Bob, men, &wire, seed));
        (
            a.join().map_err(|_| Error::Protocol("Alice panicked".into())),
            b.join().map_err(|_| Error::Protocol("Bob panicked".into())),
        )
    });
    let (alice, bob) = match (alice.and_then(|r| r), bob.and_then(|r| r)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), Ok(_)) | (Ok(_), Err(e)) => return Err(e),
        // Prefer the root cause over the peer's hang-up notice.
        (Err(a), Err(b)) => {
            return Err(if matches!(a, Error::Protocol(_)) { b } else { a });
        }
    };
    if alice != bob {
        return Err(Error::Protocol(format!(
            "parties disagree on the output: Alice {alice:?}, Bob {bob:?}"
        )));
    }
    Ok(ProtocolRun {
        output: alice,
        transcript: wire.into_transcript(),
        seed,
    })
}

/// One line of a protocol experiment, as emitted by the command line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub protocol: String,
    pub n: usize,
    pub seed: u64,
    pub bits: usize,
    pub output: serde_json::Value,
    pub correct: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uint_round_trip() {
        let b = BitString::from_uint(5, 4);
        assert_eq!(b.to_string(), "0101");
        assert_eq!(b.to_uint(), 5);
        assert!(BitString::from_uint(0, 0).is_empty());
    }

    #[test]
    fn dump_format() {
        let mut t = Transcript::default();
        t.append(Party::Bob, BitString::from_uint(2, 2));
        t.append(Party::Alice, BitString::from_uint(1, 1));
        assert_eq!(t.dump(), "B 10\nA 1\n");
        assert_eq!(t.total_bits(), 3);
        assert_eq!(t.bits_from(Party::Bob), 2);
    }
}
