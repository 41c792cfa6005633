/// An error together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

/// User or content error: bad input, failed validation, unknown object.
pub const CONTENT: u8 = 1;
/// Environment error: I/O, locking, corrupt store files.
pub const IO: u8 = 2;

impl Failure {
    pub fn content(msg: impl Into<String>) -> Self {
        Failure {
            code: CONTENT,
            error: anyhow::Error::msg(msg.into()),
        }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        Failure {
            code: IO,
            error: anyhow::Error::msg(msg.into()),
        }
    }

    /// A failure whose message was already reported.
    pub fn silent(code: u8) -> Self {
        Failure {
            code,
            error: anyhow::anyhow!(""),
        }
    }
}

pub trait ResultExt<T> {
    fn io_context(self, ctx: impl FnOnce() -> String) -> Result<T, Failure>;
    fn content_context(self, ctx: impl FnOnce() -> String) -> Result<T, Failure>;
}

impl<T, E> ResultExt<T> for Result<T, E>
where
    E: std::error::Error + Send + Sync + 'static,
{
    fn io_context(self, ctx: impl FnOnce() -> String) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            code: IO,
            error: anyhow::Error::new(e).context(ctx()),
        })
    }

    fn content_context(self, ctx: impl FnOnce() -> String) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            code: CONTENT,
            error: anyhow::Error::new(e).context(ctx()),
        })
    }
}
