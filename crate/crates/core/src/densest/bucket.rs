//! Score-bucketed vertex queue with a resumable minimum scan.
//!
//! Bucket `i` covers scores within `width / 2` of `(i - 1) * width`, clamped
//! to `1..=bucket_count`. Between consecutive pops the minimum score can
//! drop by at most one bucket (scores only shrink when vertices flush, and
//! relocations repair the scan cursor), so the cursor makes the total scan
//! cost linear in the bucket count rather than quadratic.

use super::schedule::NIL;

pub(crate) struct BucketQueue {
    head: Vec<u32>,
    next: Vec<u32>,
    prev: Vec<u32>,
    bucket: Vec<u32>,
    width: i64,
    bucket_count: u32,
    cursor: u32,
    len: usize,
}

impl BucketQueue {
    pub fn new(n: usize, width: i64, bucket_count: u32) -> BucketQueue {
        debug_assert!(width >= 1 && bucket_count >= 1);
        BucketQueue {
            head: vec![NIL; bucket_count as usize + 1],
            next: vec![NIL; n],
            prev: vec![NIL; n],
            bucket: vec![NIL; n],
            width,
            bucket_count,
            cursor: 1,
            len: 0,
        }
    }

    /// Index of the bucket whose center is nearest `score` (ties round up),
    /// clamped to the valid range.
    pub fn bucket_for(&self, score: i64) -> u32 {
        let idx = (score + self.width.div_euclid(2)).div_euclid(self.width) + 1;
        idx.clamp(1, self.bucket_count as i64) as u32
    }

    pub fn insert(&mut self, v: u32, score: i64) {
        let b = self.bucket_for(score);
        self.link(v, b);
        self.len += 1;
        if b < self.cursor {
            self.cursor = b;
        }
    }

    /// Moves `v` to the bucket for `score` if that differs from its current
    /// one, pulling the scan cursor back when the move goes left.
    pub fn relocate(&mut self, v: u32, score: i64) {
        let b = self.bucket_for(score);
        let cur = self.bucket[v as usize];
        debug_assert_ne!(cur, NIL, "relocate of a vertex not in the queue");
        if b == cur {
            return;
        }
        self.unlink(v);
        self.link(v, b);
        if b < self.cursor {
            self.cursor = b;
        }
    }

    /// Detaches one vertex from the first non-empty bucket at or after the
    /// cursor. LIFO within a bucket.
    pub fn pop_min(&mut self) -> Option<u32> {
        if self.len == 0 {
            return None;
        }
        let mut i = self.cursor.max(1);
        while self.head[i as usize] == NIL {
            i += 1;
            debug_assert!(i <= self.bucket_count, "len counter out of sync");
        }
        let v = self.head[i as usize];
        self.unlink(v);
        self.len -= 1;
        // The next minimum sits at bucket i - 1 at the earliest.
        self.cursor = (i - 1).max(1);
        Some(v)
    }

    #[cfg(test)]
    pub fn bucket_of(&self, v: u32) -> Option<u32> {
        let b = self.bucket[v as usize];
        (b != NIL).then_some(b)
    }

    fn link(&mut self, v: u32, b: u32) {
        let vi = v as usize;
        debug_assert_eq!(self.bucket[vi], NIL);
        let h = self.head[b as usize];
        self.next[vi] = h;
        self.prev[vi] = NIL;
        if h != NIL {
            self.prev[h as usize] = v;
        }
        self.head[b as usize] = v;
        self.bucket[vi] = b;
    }

    fn unlink(&mut self, v: u32) {
        let vi = v as usize;
        let b = self.bucket[vi];
        debug_assert_ne!(b, NIL);
        let (p, nx) = (self.prev[vi], self.next[vi]);
        if p == NIL {
            self.head[b as usize] = nx;
        } else {
            self.next[p as usize] = nx;
        }
        if nx != NIL {
            self.prev[nx as usize] = p;
        }
        self.bucket[vi] = NIL;
        self.next[vi] = NIL;
        self.prev[vi] = NIL;
    }
}
