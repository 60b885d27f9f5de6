//! Running a program under a wall-clock budget.
//!
//! Each calling thread owns one worker thread that executes jobs. A job that
//! overruns its budget is abandoned together with its worker; the next call
//! starts a fresh worker. Panics inside a job are caught and reported.

use std::any::Any;
use std::cell::RefCell;
use std::fmt;
use std::panic::{self, AssertUnwindSafe};
use std::sync::mpsc::{self, RecvTimeoutError, Sender};
use std::thread;
use std::time::Duration;

/// Default per-execution budget.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(5);

/// Why a single program execution did not yield an output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExecutionFailure {
    Panicked(String),
    TimedOut(Duration),
    /// The program reported an error of its own (e.g. a search budget).
    Failed(String),
}

impl fmt::Display for ExecutionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Panicked(msg) => write!(f, "panicked: {msg}"),
            Self::TimedOut(budget) => write!(f, "exceeded budget of {} ms", budget.as_millis()),
            Self::Failed(msg) => write!(f, "failed: {msg}"),
        }
    }
}

/// Execution budget for one program run. `None` runs inline (panics are
/// still caught, divergence is not).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub Option<Duration>);

impl Default for Budget {
    fn default() -> Self {
        Budget(Some(DEFAULT_BUDGET))
    }
}

impl Budget {
    pub const UNLIMITED: Budget = Budget(None);
}

type Job = Box<dyn FnOnce() + Send>;

struct Worker {
    jobs: Sender<Job>,
}

impl Worker {
    fn spawn() -> Worker {
        let (tx, rx) = mpsc::channel::<Job>();
        thread::Builder::new()
            .name("intramorph-exec".into())
            .spawn(move || {
                for job in rx {
                    job();
                }
            })
            .expect("spawn execution worker");
        Worker { jobs: tx }
    }
}

thread_local! {
    static WORKER: RefCell<Option<Worker>> = const { RefCell::new(None) };
}

fn panic_message(payload: Box<dyn Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".to_string()
    }
}

fn catch<T>(job: impl FnOnce() -> Result<T, ExecutionFailure>) -> Result<T, ExecutionFailure> {
    match panic::catch_unwind(AssertUnwindSafe(job)) {
        Ok(result) => result,
        Err(payload) => Err(ExecutionFailure::Panicked(panic_message(payload))),
    }
}

/// Runs `job` within `budget`.
pub fn run_budgeted<T, F>(budget: Budget, job: F) -> Result<T, ExecutionFailure>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, ExecutionFailure> + Send + 'static,
{
    let Some(limit) = budget.0 else {
        return catch(job);
    };

    let (tx, rx) = mpsc::sync_channel(1);
    let wrapped: Job = Box::new(move || {
        let _ = tx.send(catch(job));
    });

    WORKER.with(|cell| {
        let mut slot = cell.borrow_mut();
        let worker = slot.get_or_insert_with(Worker::spawn);
        if let Err(mpsc::SendError(job)) = worker.jobs.send(wrapped) {
            // worker died; replace it and retry once
            *worker = Worker::spawn();
            worker.jobs.send(job).expect("fresh execution worker");
        }
        match rx.recv_timeout(limit) {
            Ok(result) => result,
            Err(RecvTimeoutError::Timeout) => {
                *slot = None;
                Err(ExecutionFailure::TimedOut(limit))
            }
            Err(RecvTimeoutError::Disconnected) => {
                *slot = None;
                Err(ExecutionFailure::Panicked(
                    "execution worker terminated".into(),
                ))
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn returns_value_within_budget() {
        assert_eq!(run_budgeted(Budget::default(), || Ok(7)), Ok(7));
        assert_eq!(run_budgeted(Budget::UNLIMITED, || Ok(8)), Ok(8));
    }

    #[test]
    fn panics_become_failures() {
        let out: Result<(), _> = run_budgeted(Budget::default(), || panic!("boom"));
        assert_eq!(out, Err(ExecutionFailure::Panicked("boom".into())));
        let out: Result<(), _> = run_budgeted(Budget::UNLIMITED, || panic!("inline"));
        assert_eq!(out, Err(ExecutionFailure::Panicked("inline".into())));
        // worker survives a caught panic
        assert_eq!(run_budgeted(Budget::default(), || Ok(1)), Ok(1));
    }

    #[test]
    fn divergence_times_out_and_worker_is_replaced() {
        let budget = Budget(Some(Duration::from_millis(50)));
        let out: Result<(), _> = run_budgeted(budget, || loop {
            thread::sleep(Duration::from_millis(10));
        });
        assert_eq!(
            out,
            Err(ExecutionFailure::TimedOut(Duration::from_millis(50)))
        );
        assert_eq!(run_budgeted(budget, || Ok("after")), Ok("after"));
    }
}
