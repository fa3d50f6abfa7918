//! Step-indexed flush agenda.
//!
//! Slot `t` holds the vertices whose next successful threshold check has
//! been presampled to land on peel step `t`. Intrusive doubly-linked lists
//! over flat arrays: every operation is O(1) and nothing allocates after
//! construction.

pub(crate) const NIL: u32 = u32::MAX;

pub(crate) struct ScheduleTable {
    head: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    slot: Vec<u32>,
}

impl ScheduleTable {
    /// Agenda for `n` vertices over slots `1..=slots`.
    pub fn new(n: usize, slots: usize) -> ScheduleTable {
        ScheduleTable {
            head: vec![NIL; slots + 1],
            next: vec![NIL; n],
            prev: vec![NIL; n],
            slot: vec![NIL; n],
        }
    }

    #[cfg(test)]
    pub fn is_scheduled(&self, v: u32) -> bool {
        self.slot[v as usize] != NIL
    }

    /// Removes `v` from its slot, if any.
    pub fn unschedule(&mut self, v: u32) {
        let vi = v as usize;
        let s = self.slot[vi];
        if s == NIL {
            return;
        }
        let (p, nx) = (self.prev[vi], self.next[vi]);
        if p == NIL {
            self.head[s as usize] = nx;
        } else {
            self.next[p as usize] = nx;
        }
        if nx != NIL {
            self.prev[nx as usize] = p;
        }
        self.slot[vi] = NIL;
        self.next[vi] = NIL;
        self.prev[vi] = NIL;
    }

    /// Files `v` under `slot`. The vertex must not already be scheduled.
    pub fn schedule(&mut self, v: u32, slot: usize) {
        let vi = v as usize;
        debug_assert_eq!(self.slot[vi], NIL, "vertex already scheduled");
        debug_assert!(slot >= 1 && slot < self.head.len());
        let h = self.head[slot];
        self.next[vi] = h;
        self.prev[vi] = NIL;
        if h != NIL {
            self.prev[h as usize] = vi as u32;
        }
        self.head[slot] = v;
        self.slot[vi] = slot as u32;
    }

    /// Detaches and returns one vertex filed under `slot`, if any.
    pub fn pop_from(&mut self, slot: usize) -> Option<u32> {
        let h = self.head[slot];
        if h == NIL {
            None
        } else {
            self.unschedule(h);
            Some(h)
        }
    }
}
