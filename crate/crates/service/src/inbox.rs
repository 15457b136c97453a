use std::collections::VecDeque;
use std::sync::Mutex;

use tokio::sync::Notify;

#[derive(Debug, Clone, PartialEq)]
pub enum Inbound {
    Frame(Vec<u8>),
    Control(String),
}

#[derive(Debug, Default)]
struct Queue {
    items: VecDeque<Inbound>,
    frames: usize,
    dropped: u64,
    closed: bool,
}

/// Per-session queue between the socket reader and the filter.
///
/// Holds at most `capacity` frames. When a frame arrives at a full inbox the
/// oldest waiting frame is discarded (newest wins). Control messages are
/// never dropped and keep their position relative to frames.
#[derive(Debug)]
pub struct Inbox {
    capacity: usize,
    queue: Mutex<Queue>,
    notify: Notify,
}

impl Inbox {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "inbox capacity must be at least 1");
        Self {
            capacity,
            queue: Mutex::new(Queue::default()),
            notify: Notify::new(),
        }
    }

    pub fn push(&self, item: Inbound) {
        {
            let mut q = self.queue.lock().unwrap();
            if matches!(item, Inbound::Frame(_)) {
                if q.frames == self.capacity {
                    let oldest = q
                        .items
                        .iter()
                        .position(|i| matches!(i, Inbound::Frame(_)))
                        .expect("frame count is consistent");
                    q.items.remove(oldest);
                    q.frames -= 1;
                    q.dropped += 1;
                }
                q.frames += 1;
            }
            q.items.push_back(item);
        }
        self.notify.notify_one();
    }

    pub fn close(&self) {
        self.queue.lock().unwrap().closed = true;
        self.notify.notify_one();
    }

    /// Frames discarded since the last call.
    pub fn take_dropped(&self) -> u64 {
        std::mem::take(&mut self.queue.lock().unwrap().dropped)
    }

    /// Next item in arrival order; `None` once closed and drained.
    pub async fn pop(&self) -> Option<Inbound> {
        loop {
            {
                let mut q = self.queue.lock().unwrap();
                if let Some(item) = q.items.pop_front() {
                    if matches!(item, Inbound::Frame(_)) {
                        q.frames -= 1;
                    }
                    return Some(item);
                }
                if q.closed {
                    return None;
                }
            }
            self.notify.notified().await;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(tag: u8) -> Inbound {
        Inbound::Frame(vec![tag])
    }

    #[tokio::test]
    async fn newest_frames_win() {
        let inbox = Inbox::new(4);
        for tag in 0..10 {
            inbox.push(frame(tag));
        }
        inbox.close();
        assert_eq!(inbox.take_dropped(), 6);
        assert_eq!(inbox.take_dropped(), 0);
        let mut kept = Vec::new();
        while let Some(item) = inbox.pop().await {
            kept.push(item);
        }
        assert_eq!(kept, vec![frame(6), frame(7), frame(8), frame(9)]);
    }

    #[tokio::test]
    async fn controls_are_kept_in_order() {
        let inbox = Inbox::new(1);
        inbox.push(frame(0));
        inbox.push(Inbound::Control("a".into()));
        inbox.push(frame(1));
        inbox.push(Inbound::Control("b".into()));
        inbox.push(frame(2));
        inbox.close();
        assert_eq!(inbox.take_dropped(), 2);
        let mut kept = Vec::new();
        while let Some(item) = inbox.pop().await {
            kept.push(item);
        }
        assert_eq!(
            kept,
            vec![Inbound::Control("a".into()), Inbound::Control("b".into()), frame(2)]
        );
    }

    #[tokio::test]
    async fn pop_waits_for_push() {
        let inbox = std::sync::Arc::new(Inbox::new(2));
        let waiter = {
            let inbox = inbox.clone();
            tokio::spawn(async move { inbox.pop().await })
        };
        tokio::task::yield_now().await;
        inbox.push(frame(3));
        assert_eq!(waiter.await.unwrap(), Some(frame(3)));
    }
}
