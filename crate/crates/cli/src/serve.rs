//! Minimal static file server for the explorer UI and exported documents.

use std::fs::File;
use std::path::{Component, Path, PathBuf};

use anyhow::{anyhow, Result};
use tiny_http::{Header, Response, Server};

fn content_type(path: &Path) -> &'static str {
    match path.extension().and_then(|e| e.to_str()).unwrap_or("") {
        "html" | "htm" => "text/html; charset=utf-8",
        "js" | "mjs" => "text/javascript; charset=utf-8",
        "css" => "text/css; charset=utf-8",
        "json" => "application/json",
        "graphml" | "xml" => "application/xml",
        "svg" => "image/svg+xml",
        "png" => "image/png",
        "csv" => "text/csv; charset=utf-8",
        _ => "application/octet-stream",
    }
}

/// Map a request path onto `root`, refusing anything that escapes it.
pub fn resolve(root: &Path, url: &str) -> Option<PathBuf> {
    let path = url.split(['?', '#']).next().unwrap_or("");
    let mut out = root.to_path_buf();
    for part in Path::new(path.trim_start_matches('/')).components() {
        match part {
            Component::Normal(p) => out.push(p),
            Component::CurDir => {}
            _ => return None,
        }
    }
    if out.is_dir() {
        out.push("index.html");
    }
    Some(out)
}

pub fn serve(root: &Path, bind: &str, port: u16, on_ready: impl FnOnce(&str)) -> Result<()> {
    let server = Server::http((bind, port)).map_err(|e| anyhow!("cannot listen on {bind}:{port}: {e}"))?;
    let addr = server.server_addr().to_ip().ok_or_else(|| anyhow!("server has no IP address"))?;
    on_ready(&format!("http://{addr}/"));
    for request in server.incoming_requests() {
        let target = resolve(root, request.url()).filter(|p| p.is_file());
        let result = match target.and_then(|p| File::open(&p).ok().map(|f| (p, f))) {
            Some((path, file)) => {
                let header = Header::from_bytes("Content-Type", content_type(&path)).expect("static header");
                request.respond(Response::from_file(file).with_header(header))
            }
            None => request.respond(Response::from_string("not found").with_status_code(404)),
        };
        if let Err(e) = result {
            log::warn!("failed to respond: {e}");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refuses_traversal() {
        let root = Path::new("/srv/site");
        assert_eq!(resolve(root, "/graph.json?v=2"), Some(PathBuf::from("/srv/site/graph.json")));
        assert_eq!(resolve(root, "/../etc/passwd"), None);
        assert_eq!(resolve(root, "/a/./b.js"), Some(PathBuf::from("/srv/site/a/b.js")));
    }
}
