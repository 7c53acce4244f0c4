use std::collections::VecDeque;
use std::sync::{Condvar, Mutex, MutexGuard};

use super::{BitString, Party, Transcript};
use crate::{Error, Result};

struct State {
    floor: Party,
    inbox: [VecDeque<BitString>; 2],
    waiting: [bool; 2],
    done: [bool; 2],
    deadlock: bool,
    transcript: Transcript,
}

/// Half-duplex metered link shared by the two party threads.
pub(super) struct Wire {
    state: Mutex<State>,
    cv: Condvar,
}

impl Wire {
    pub(super) fn new() -> Self {
        Self {
            state: Mutex::new(State {
                floor: Party::Alice,
                inbox: [VecDeque::new(), VecDeque::new()],
                waiting: [false; 2],
                done: [false; 2],
                deadlock: false,
                transcript: Transcript::default(),
            }),
            cv: Condvar::new(),
        }
    }

    pub(super) fn endpoint(&self, me: Party) -> Endpoint<'_> {
        Endpoint { me, wire: self }
    }

    pub(super) fn into_transcript(self) -> Transcript {
        self.state.into_inner().expect("wire lock poisoned").transcript
    }

    fn lock(&self) -> MutexGuard<'_, State> {
        self.state.lock().expect("wire lock poisoned")
    }
}

/// One party's end of the wire.
pub struct Endpoint<'a> {
    me: Party,
    wire: &'a Wire,
}

impl Endpoint<'_> {
    pub fn send(&mut self, bits: BitString) -> Result<()> {
        let me = self.me;
        let mut st = self.wire.lock();
        while st.floor != me {
            if st.deadlock {
                return Err(Error::Protocol("deadlock".into()));
            }
            st = self.wire.cv.wait(st).expect("wire lock poisoned");
        }
        st.transcript.append(me, bits.clone());
        st.inbox[me.other().slot()].push_back(bits);
        self.wire.cv.notify_all();
        Ok(())
    }

    pub fn recv(&mut self) -> Result<BitString> {
        let me = self.me;
        let other = me.other();
        let mut st = self.wire.lock();
        loop {
            if let Some(bits) = st.inbox[me.slot()].pop_front() {
                st.waiting[me.slot()] = false;
                return Ok(bits);
            }
            // Nothing to read: hand over the floor so the other party can
            // answer. Messages already queued are read without passing it.
            if st.floor == me {
                st.floor = other;
                self.wire.cv.notify_all();
            }
            if st.deadlock {
                return Err(Error::Protocol("deadlock: both parties waiting to receive".into()));
            }
            if st.done[other.slot()] {
                return Err(Error::Protocol(format!("party {other} finished while {me} waited")));
            }
            if st.waiting[other.slot()] && st.inbox[other.slot()].is_empty() {
                st.deadlock = true;
                self.wire.cv.notify_all();
                return Err(Error::Protocol("deadlock: both parties waiting to receive".into()));
            }
            st.waiting[me.slot()] = true;
            st = self.wire.cv.wait(st).expect("wire lock poisoned");
        }
    }
}

impl Drop for Endpoint<'_> {
    fn drop(&mut self) {
        let mut st = self.wire.lock();
        st.done[self.me.slot()] = true;
        st.waiting[self.me.slot()] = false;
        st.floor = self.me.other();
        self.wire.cv.notify_all();
    }
}
