"""Line-oriented wire protocol between the synthesizer and an external guide.

One request per line: `GUESS <space-joined type tokens>`.  The guide answers
with exactly one line, `TERM <space-joined term tokens>` or `NONE`.  The
transport is the child process's standard streams, so any language can
implement a guide.  Reads are bounded by a timeout; a crashed or silent guide
raises GuideError rather than hanging.
"""

from __future__ import annotations

import os
import select
import shlex
import subprocess

from .tokens import TokenSeq, split_tokens

REQUEST = "GUESS"
RESPONSE_TERM = "TERM"
RESPONSE_NONE = "NONE"


class GuideError(Exception):
    pass


def format_request(type_tokens: TokenSeq) -> str:
    return f"{REQUEST} {' '.join(type_tokens)}"


def parse_request(line: str) -> TokenSeq:
    parts = line.strip().split(None, 1)
    if not parts or parts[0] != REQUEST:
        raise GuideError(f"malformed request line: {line!r}")
    return split_tokens(parts[1]) if len(parts) > 1 else []


def format_response(term_tokens: TokenSeq | None) -> str:
    if term_tokens is None:
        return RESPONSE_NONE
    return f"{RESPONSE_TERM} {' '.join(term_tokens)}"


def parse_response(line: str) -> TokenSeq | None:
    line = line.strip()
    if line == RESPONSE_NONE:
        return None
    parts = line.split(None, 1)
    if parts and parts[0] == RESPONSE_TERM:
        return split_tokens(parts[1]) if len(parts) > 1 else []
    raise GuideError(f"malformed response line: {line!r}")


class GuideClient:
    """Client for a guide subprocess; one response line consumed per request."""

    def __init__(self, cmdline: str, timeout: float = 30.0):
        self.timeout = timeout
        try:
            self.proc = subprocess.Popen(
                shlex.split(cmdline),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=False,
            )
        except OSError as e:
            raise GuideError(f"cannot start guide {cmdline!r}: {e}") from e
        self._buf = b""

    def _read_line(self) -> str:
        fd = self.proc.stdout.fileno()
        while b"\n" not in self._buf:
            ready, _, _ = select.select([fd], [], [], self.timeout)
            if not ready:
                raise GuideError(f"guide did not answer within {self.timeout}s")
            chunk = os.read(fd, 4096)
            if not chunk:
                raise GuideError("guide closed its output stream")
            self._buf += chunk
        line, self._buf = self._buf.split(b"\n", 1)
        return line.decode("utf-8")

    def ask(self, type_tokens: TokenSeq) -> TokenSeq | None:
        if self.proc.poll() is not None:
            raise GuideError("guide process has exited")
        try:
            self.proc.stdin.write((format_request(type_tokens) + "\n").encode("utf-8"))
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise GuideError(f"cannot write to guide: {e}") from e
        return parse_response(self._read_line())

    def close(self) -> None:
        for stream in (self.proc.stdin, self.proc.stdout):
            try:
                stream.close()
            except OSError:
                pass
        if self.proc.poll() is None:
            self.proc.terminate()
            try:
                self.proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait()

    def __enter__(self) -> "GuideClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
