//! JSON-over-HTTP transport shared by the model-service clients.

use std::thread;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum GatewayError {
    #[error("transport error calling {endpoint} after {attempts} attempt(s): {message}")]
    Transport {
        endpoint: String,
        attempts: u32,
        message: String,
    },
    #[error("protocol error from {endpoint}: {message}")]
    Protocol { endpoint: String, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("backend returned an empty generation")]
    EmptyGeneration,
}

impl GatewayError {
    pub(crate) fn protocol(endpoint: &str, message: impl Into<String>) -> Self {
        GatewayError::Protocol {
            endpoint: endpoint.to_string(),
            message: message.into(),
        }
    }
}

/// Connection settings for the model service.
#[derive(Debug, Clone, PartialEq)]
pub struct HttpConfig {
    /// Base URL, e.g. `http://127.0.0.1:8080`.
    pub endpoint: String,
    pub timeout: Duration,
    /// Extra attempts after the first failure.
    pub retries: u32,
    pub batch_size: usize,
    /// Upper bound on concurrent in-flight requests.
    pub max_in_flight: usize,
}

impl HttpConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            timeout: Duration::from_secs(60),
            retries: 2,
            batch_size: 32,
            max_in_flight: 4,
        }
    }

    /// Overrides from `MODEL_SERVICE_TIMEOUT_SECS`, `MODEL_SERVICE_RETRIES`,
    /// `MODEL_SERVICE_BATCH_SIZE` and `MODEL_SERVICE_MAX_IN_FLIGHT`.
    pub fn with_env_overrides(mut self) -> Self {
        fn var<T: std::str::FromStr>(name: &str) -> Option<T> {
            std::env::var(name).ok()?.trim().parse().ok()
        }
        if let Some(secs) = var::<u64>("MODEL_SERVICE_TIMEOUT_SECS") {
            self.timeout = Duration::from_secs(secs);
        }
        if let Some(r) = var("MODEL_SERVICE_RETRIES") {
            self.retries = r;
        }
        if let Some(b) = var::<usize>("MODEL_SERVICE_BATCH_SIZE") {
            self.batch_size = b.max(1);
        }
        if let Some(m) = var::<usize>("MODEL_SERVICE_MAX_IN_FLIGHT") {
            self.max_in_flight = m.max(1);
        }
        self
    }
}

#[derive(Debug, Clone)]
pub(crate) struct JsonClient {
    agent: ureq::Agent,
    config: HttpConfig,
}

impl JsonClient {
    pub fn new(config: HttpConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(config.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Self { agent, config }
    }

    pub fn config(&self) -> &HttpConfig {
        &self.config
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{}", self.config.endpoint.trim_end_matches('/'), path)
    }

    /// POST with retries on transport failures and 5xx responses. Other
    /// non-2xx statuses and undecodable bodies are protocol errors.
    pub fn post<Req: Serialize, Resp: DeserializeOwned>(
        &self,
        path: &str,
        body: &Req,
    ) -> Result<Resp, GatewayError> {
        let url = self.url(path);
        let attempts = self.config.retries + 1;
        let mut last = String::new();
        for attempt in 1..=attempts {
            match self.agent.post(&url).send_json(body) {
                Ok(mut response) => {
                    let status = response.status().as_u16();
                    if (200..300).contains(&status) {
                        return response
                            .body_mut()
                            .read_json::<Resp>()
                            .map_err(|e| GatewayError::protocol(&url, format!("bad response body: {e}")));
                    }
                    let text = response.body_mut().read_to_string().unwrap_or_default();
                    if status < 500 {
                        return Err(GatewayError::protocol(&url, format!("status {status}: {text}")));
                    }
                    last = format!("status {status}: {text}");
                }
                Err(e) => last = e.to_string(),
            }
            if attempt < attempts {
                thread::sleep(Duration::from_millis(50 * u64::from(attempt)));
            }
        }
        Err(GatewayError::Transport {
            endpoint: url,
            attempts,
            message: last,
        })
    }
}

/// Split `items` into batches and run `call` on up to `max_in_flight`
/// batches at a time. Results are reassembled in input order.
pub(crate) fn run_batched<I, T, F>(
    items: &[I],
    batch_size: usize,
    max_in_flight: usize,
    call: F,
) -> Result<Vec<T>, GatewayError>
where
    I: Sync,
    T: Send,
    F: Fn(&[I]) -> Result<Vec<T>, GatewayError> + Sync,
{
    let batches: Vec<&[I]> = items.chunks(batch_size.max(1)).collect();
    let mut out = Vec::with_capacity(items.len());
    for wave in batches.chunks(max_in_flight.max(1)) {
        let results: Vec<Result<Vec<T>, GatewayError>> = if wave.len() == 1 {
            vec![call(wave[0])]
        } else {
            thread::scope(|scope| {
                let handles: Vec<_> = wave
                    .iter()
                    .map(|batch| scope.spawn(|| call(batch)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("gateway worker panicked"))
                    .collect()
            })
        };
        for (batch, result) in wave.iter().zip(results) {
            let values = result?;
            if values.len() != batch.len() {
                return Err(GatewayError::Protocol {
                    endpoint: String::new(),
                    message: format!(
                        "expected {} results for batch, got {}",
                        batch.len(),
                        values.len()
                    ),
                });
            }
            out.extend(values);
        }
    }
    Ok(out)
}
