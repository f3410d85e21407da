//! Protocol transcripts: one event per line,
//! `step_id TAB party TAB event TAB payload-hex`.

use super::Party;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub step_id: String,
    pub party: Party,
    pub event: String,
    pub payload: Vec<u8>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn new() -> Self {
        Transcript::default()
    }

    pub fn record(&mut self, step_id: &str, party: Party, event: &str, payload: &[u8]) {
        self.events.push(Event {
            step_id: step_id.to_string(),
            party,
            event: event.to_string(),
            payload: payload.to_vec(),
        });
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn extend(&mut self, other: Transcript) {
        self.events.extend(other.events);
    }

    /// Line-oriented serialization, one event per line.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.step_id);
            out.push('\t');
            out.push_str(e.party.name());
            out.push('\t');
            out.push_str(&e.event);
            out.push('\t');
            for b in &e.payload {
                out.push_str(&format!("{b:02x}"));
            }
            out.push('\n');
        }
        out
    }
}

impl std::fmt::Display for Transcript {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_lines())
    }
}
