import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from swhid import Content, swhid_of
from gitoracle import GitOracle

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def gpl3_bytes() -> bytes:
    return (DATA_DIR / "gpl-3.0.txt").read_bytes()


@pytest.fixture
def oracle(tmp_path) -> GitOracle:
    return GitOracle(tmp_path / "oracle-repo")


@pytest.fixture(scope="session")
def session_oracle(tmp_path_factory) -> GitOracle:
    # One repo shared by hot loops; git object reuse is harmless here.
    return GitOracle(tmp_path_factory.mktemp("oracle") / "repo")


class _ArchiveHandler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def _send(self, status: int, body: bytes, content_type: str):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        archive = self.server.archive
        path = self.path
        if path.startswith("/api/1/resolve/"):
            archive.resolve_requests += 1
            if archive.fail_resolve > 0:
                archive.fail_resolve -= 1
                self._send(500, b"boom", "text/plain")
                return
            if archive.garbage_resolve:
                self._send(200, b"<html>not json</html>", "text/html")
                return
            key = path[len("/api/1/resolve/") :].rstrip("/")
            payload = archive.metadata.get(key)
            if payload is None:
                self._send(404, b"{}", "application/json")
                return
            self._send(200, json.dumps(payload).encode(), "application/json")
        elif path.startswith("/api/1/content/sha1_git:") and path.endswith(
            "/raw/"
        ):
            archive.raw_requests += 1
            if archive.fail_raw > 0:
                archive.fail_raw -= 1
                self._send(500, b"boom", "text/plain")
                return
            hex_id = path[len("/api/1/content/sha1_git:") : -len("/raw/")]
            data = archive.contents.get(hex_id)
            if data is None:
                self._send(404, b"not found", "text/plain")
                return
            if (
                archive.corrupt_every
                and archive.raw_requests % archive.corrupt_every == 0
            ):
                data = archive.corrupt(data)
            self._send(200, data, "application/octet-stream")
        else:
            self._send(404, b"not found", "text/plain")


class MockArchive:
    """Stand-in for the archive REST API on 127.0.0.1.

    contents maps content hex ids to raw bytes; metadata maps core
    identifier strings to resolve-endpoint payloads. corrupt_every=N flips
    a byte in every Nth raw response; fail_raw/fail_resolve serve that
    many 500s before succeeding.
    """

    def __init__(self):
        self.contents = {}
        self.metadata = {}
        self.corrupt_every = 0
        self.fail_raw = 0
        self.fail_resolve = 0
        self.garbage_resolve = False
        self.raw_requests = 0
        self.resolve_requests = 0
        self._server = ThreadingHTTPServer(("127.0.0.1", 0), _ArchiveHandler)
        self._server.archive = self
        self._thread = threading.Thread(
            target=self._server.serve_forever, daemon=True
        )
        self._thread.start()

    @property
    def endpoint(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}"

    @staticmethod
    def corrupt(data: bytes) -> bytes:
        if not data:
            return b"\x00"
        return bytes([data[0] ^ 0xFF]) + data[1:]

    def add_content(self, data: bytes, object_type_name: str = "content"):
        """Register bytes plus matching resolve metadata; return the id."""
        swhid = swhid_of(Content(data))
        self.contents[swhid.object_id.hex] = data
        self.metadata[str(swhid)] = {
            "object_type": object_type_name,
            "object_id": swhid.object_id.hex,
            "browse_url": f"{self.endpoint}/browse/{swhid}",
        }
        return swhid

    def close(self):
        self._server.shutdown()
        self._server.server_close()


@pytest.fixture
def archive():
    server = MockArchive()
    yield server
    server.close()
