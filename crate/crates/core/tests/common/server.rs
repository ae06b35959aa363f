//! A local HTTP server standing in for the model service.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

use serde_json::Value;
use tiny_http::{Header, Response, Server};

pub type Handler = dyn Fn(&str, &Value, usize) -> (u16, Value) + Send + Sync;

pub struct FixtureServer {
    pub url: String,
    server: Arc<Server>,
    hits: Arc<AtomicUsize>,
    worker: Option<JoinHandle<()>>,
}

impl FixtureServer {
    /// `handler(path, body, hit_number)` returns a status and JSON body.
    pub fn start(handler: Box<Handler>) -> Self {
        let server = Arc::new(Server::http("127.0.0.1:0").expect("bind"));
        let url = format!("http://{}", server.server_addr().to_ip().expect("ip"));
        let hits = Arc::new(AtomicUsize::new(0));
        let (srv, counter) = (Arc::clone(&server), Arc::clone(&hits));
        let worker = std::thread::spawn(move || {
            for mut request in srv.incoming_requests() {
                let hit = counter.fetch_add(1, Ordering::SeqCst);
                let mut body = String::new();
                let _ = request.as_reader().read_to_string(&mut body);
                let json: Value = serde_json::from_str(&body).unwrap_or(Value::Null);
                let (status, reply) = handler(request.url(), &json, hit);
                let header = Header::from_bytes("Content-Type", "application/json").unwrap();
                let response = Response::from_string(reply.to_string())
                    .with_status_code(status)
                    .with_header(header);
                let _ = request.respond(response);
            }
        });
        Self {
            url,
            server,
            hits,
            worker: Some(worker),
        }
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }
}

impl Drop for FixtureServer {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
    }
}
