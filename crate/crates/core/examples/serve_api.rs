//! Serve the HTTP API for the fixture catalog, then exercise it with a
//! couple of requests and shut down.
//!
//! cargo run --example serve_api -- [--stay]
//!
//! With `--stay` the server keeps running on 127.0.0.1:8080 until Ctrl-C.

use std::net::SocketAddr;
use std::path::Path;

use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::TcpStream;
use valuerank::catalog::load_catalog;
use valuerank::service;

async fn post(addr: SocketAddr, path: &str, body: &str) -> std::io::Result<String> {
    let mut stream = TcpStream::connect(addr).await?;
    let request = format!(
        "POST {path} HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\n\
         Content-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(request.as_bytes()).await?;
    let mut response = String::new();
    stream.read_to_string(&mut response).await?;
    Ok(response)
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let catalog = load_catalog(&fixtures.join("catalog.json"), None, None)?;
    let stay = std::env::args().any(|a| a == "--stay");

    let port = if stay { 8080 } else { 0 };
    let listener = service::bind(SocketAddr::from(([127, 0, 0, 1], port))).await?;
    let addr = listener.local_addr()?;
    let app = service::router(catalog, None);
    println!("listening on http://{addr}");

    if stay {
        service::serve(listener, app, async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
        return Ok(());
    }

    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = tokio::spawn(service::serve(listener, app, async {
        let _ = stopped.await;
    }));

    let weights = r#"{"utility": 8, "creation_date": 10, "n_objects": 8, "usage": 5}"#;
    for body in [
        format!(r#"{{"weights": {weights}}}"#),
        r#"{"weights": {"utility": 0, "creation_date": 0, "n_objects": 0, "usage": 0}}"#
            .to_string(),
    ] {
        let response = post(addr, "/api/rank", &body).await?;
        let status = response.lines().next().unwrap_or_default();
        let payload = response.split("\r\n\r\n").nth(1).unwrap_or_default();
        let preview: String = payload.chars().take(160).collect();
        println!("POST /api/rank -> {status}\n  {preview}...");
    }

    let _ = stop.send(());
    server.await??;
    Ok(())
}
