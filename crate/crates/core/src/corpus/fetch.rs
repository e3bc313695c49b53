//! Random repository sampling through the GitHub REST API.
//!
//! A sample is drawn by requesting `/repositories?since=<n>` with `n` uniform
//! in `0..id_upper_bound` and taking the first repository returned. The
//! repository's language and its `README.md` at the default branch root are
//! then fetched. HTTP is abstracted behind [`Transport`] so the sampler can
//! run against recorded fixtures.

use std::collections::HashSet;
use std::time::Duration;

use base64::Engine;
use serde::Deserialize;

use super::RepoRecord;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

pub const API_ROOT: &str = "https://api.github.com";

#[derive(Debug, Clone, Default)]
pub struct HttpResponse {
    pub status: u16,
    /// Header names are lowercase.
    pub headers: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl HttpResponse {
    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers.iter().find(|(k, _)| k.eq_ignore_ascii_case(name)).map(|(_, v)| v.as_str())
    }
}

pub trait Transport {
    /// Performs a GET. Non-2xx statuses are returned as responses; only
    /// connection-level failures are errors.
    fn get(&self, url: &str, headers: &[(&str, &str)]) -> std::result::Result<HttpResponse, String>;
}

#[derive(Deserialize)]
struct RepoSummary {
    id: u64,
    full_name: String,
}

#[derive(Deserialize)]
struct RepoDetail {
    language: Option<String>,
}

#[derive(Deserialize)]
struct Contents {
    content: String,
    #[serde(default)]
    encoding: String,
}

pub struct RepoFetcher<T> {
    transport: T,
    token: Option<String>,
    api_root: String,
    pub max_retries: u32,
    sleeper: Box<dyn FnMut(Duration)>,
}

impl<T: Transport> RepoFetcher<T> {
    pub fn new(transport: T, token: Option<String>) -> Self {
        RepoFetcher {
            transport,
            token,
            api_root: API_ROOT.to_string(),
            max_retries: 5,
            sleeper: Box::new(std::thread::sleep),
        }
    }

    pub fn with_api_root(mut self, root: impl Into<String>) -> Self {
        self.api_root = root.into();
        self
    }

    pub fn with_sleeper(mut self, sleeper: impl FnMut(Duration) + 'static) -> Self {
        self.sleeper = Box::new(sleeper);
        self
    }

    fn backoff(&self, response: &HttpResponse, attempt: u32) -> Duration {
        if let Some(secs) = response.header("retry-after").and_then(|v| v.trim().parse::<u64>().ok()) {
            return Duration::from_secs(secs);
        }
        if response.header("x-ratelimit-remaining") == Some("0") {
            if let Some(reset) = response.header("x-ratelimit-reset").and_then(|v| v.trim().parse::<u64>().ok()) {
                let now = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs());
                return Duration::from_secs(reset.saturating_sub(now) + 1);
            }
        }
        Duration::from_secs(1u64 << attempt.min(6))
    }

    /// GET with retries on rate limiting (403/429) and server errors.
    /// Returns `None` for 404.
    fn get(&mut self, url: &str) -> Result<Option<Vec<u8>>> {
        let auth = self.token.as_ref().map(|t| format!("Bearer {t}"));
        let mut headers = vec![("Accept", "application/vnd.github+json"), ("User-Agent", "readme-taxonomy")];
        if let Some(a) = &auth {
            headers.push(("Authorization", a.as_str()));
        }
        let mut attempt = 0;
        loop {
            let outcome = self.transport.get(url, &headers);
            let wait = match outcome {
                Ok(r) if (200..300).contains(&r.status) => return Ok(Some(r.body)),
                Ok(r) if r.status == 404 => return Ok(None),
                Ok(r) if r.status == 403 || r.status == 429 || r.status >= 500 => {
                    log::warn!("GET {url}: status {}, backing off", r.status);
                    self.backoff(&r, attempt)
                }
                Ok(r) => return Err(Error::Transport(format!("GET {url}: unexpected status {}", r.status))),
                Err(e) => {
                    log::warn!("GET {url}: {e}");
                    if attempt >= self.max_retries {
                        return Err(Error::Transport(format!("GET {url}: {e}")));
                    }
                    Duration::from_secs(1u64 << attempt.min(6))
                }
            };
            if attempt >= self.max_retries {
                return Err(Error::Transport(format!("GET {url}: retries exhausted")));
            }
            (self.sleeper)(wait);
            attempt += 1;
        }
    }

    fn get_json<D: for<'de> Deserialize<'de>>(&mut self, url: &str) -> Result<Option<D>> {
        match self.get(url)? {
            None => Ok(None),
            Some(body) => serde_json::from_slice(&body)
                .map(Some)
                .map_err(|e| Error::Transport(format!("GET {url}: invalid JSON: {e}"))),
        }
    }

    fn fetch_repo(&mut self, summary: RepoSummary) -> Result<RepoRecord> {
        let root = self.api_root.clone();
        let detail: Option<RepoDetail> = self.get_json(&format!("{root}/repos/{}", summary.full_name))?;
        let language = detail.and_then(|d| d.language).is_some_and(|l| !l.is_empty());
        let contents: Option<Contents> =
            self.get_json(&format!("{root}/repos/{}/contents/README.md", summary.full_name))?;
        let readme = match contents {
            None => Vec::new(),
            Some(c) if c.encoding.is_empty() || c.encoding == "base64" => {
                let clean: String = c.content.chars().filter(|ch| !ch.is_whitespace()).collect();
                base64::engine::general_purpose::STANDARD
                    .decode(clean)
                    .map_err(|e| Error::Transport(format!("README of {}: bad base64: {e}", summary.full_name)))?
            }
            Some(c) => c.content.into_bytes(),
        };
        RepoRecord::new(summary.id, summary.full_name, readme, language)
    }

    /// Samples up to `count` distinct repositories. Each record is passed to
    /// `sink` as soon as it is complete, so a later failure keeps earlier
    /// results. Missing READMEs give records with empty `readme_bytes`.
    pub fn fetch_random_repos(
        &mut self,
        count: usize,
        id_upper_bound: u64,
        seed: u64,
        mut sink: impl FnMut(&RepoRecord) -> Result<()>,
    ) -> Result<Vec<RepoRecord>> {
        if id_upper_bound == 0 {
            return Err(Error::InvalidArgument("id upper bound must be positive".into()));
        }
        let mut rng = SeededRng::new(seed);
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(count);
        // Stop after this many draws that produced nothing new.
        let max_misses = 10 * count.max(1);
        let mut misses = 0;
        while out.len() < count && misses < max_misses {
            let since = rng.below(id_upper_bound);
            let root = self.api_root.clone();
            let page: Vec<RepoSummary> =
                self.get_json(&format!("{root}/repositories?since={since}"))?.unwrap_or_default();
            let Some(summary) = page.into_iter().next() else {
                misses += 1;
                continue;
            };
            if !seen.insert(summary.id) {
                misses += 1;
                continue;
            }
            let record = self.fetch_repo(summary)?;
            sink(&record)?;
            out.push(record);
        }
        Ok(out)
    }
}
