"""Message encoding and traffic accounting for the secure engine.

Every message crossing the in-process transport is materialised in the
wire format below, so byte counts reported by :class:`CommCounter` are
the counts a socket deployment would see:

    [length: u32 LE] [session id: u64 LE] [protocol tag: u16 LE]
    [payload: packed 64-bit ring elements, LE]

The length prefix covers everything after itself.
"""

from __future__ import annotations

import json
import struct
import threading
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

_HEADER = struct.Struct("<IQH")

# Protocol tags / traffic phases.
TAG_INPUT = 1        # owner or client hands shares to servers
TAG_MULT_OPEN = 2    # Beaver-masked openings exchanged between servers
TAG_TRIPLE = 3       # dealer distributes correlated randomness
TAG_FUNC_IN = 4      # servers submit shares to the dealer-held functionality
TAG_FUNC_OUT = 5     # dealer returns fresh output shares
TAG_OPEN = 6         # reconstruction toward a recipient

PHASE_NAMES = {
    TAG_INPUT: "input",
    TAG_MULT_OPEN: "mult_open",
    TAG_TRIPLE: "triple",
    TAG_FUNC_IN: "func_in",
    TAG_FUNC_OUT: "func_out",
    TAG_OPEN: "open",
}


@dataclass(frozen=True)
class Message:
    session: int
    tag: int
    payload: np.ndarray  # 1-D uint64

    def encode(self) -> bytes:
        body = np.ascontiguousarray(self.payload, dtype="<u8").tobytes()
        header = _HEADER.pack(8 + 2 + len(body), self.session, self.tag)
        return header + body


def decode_message(raw: bytes) -> Message:
    length, session, tag = _HEADER.unpack_from(raw, 0)
    if length != len(raw) - 4:
        raise ValueError(f"length prefix {length} does not match frame size {len(raw) - 4}")
    payload = np.frombuffer(raw, dtype="<u8", offset=_HEADER.size).astype(np.uint64)
    return Message(session=session, tag=tag, payload=payload)


class CommCounter:
    """Monotone per-party traffic counters, broken down by protocol phase.

    Local operations (secure addition, share construction by an input
    owner) never touch the transport, so they contribute nothing here.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self.bytes_sent = defaultdict(int)
        self.messages_sent = defaultdict(int)
        self.elements_sent = defaultdict(int)
        self.phase_bytes = defaultdict(lambda: defaultdict(int))
        self.phase_elements = defaultdict(lambda: defaultdict(int))

    def record(self, sender, tag: int, nbytes: int, nelements: int):
        phase = PHASE_NAMES.get(tag, f"tag{tag}")
        with self._lock:
            self.bytes_sent[sender] += nbytes
            self.messages_sent[sender] += 1
            self.elements_sent[sender] += nelements
            self.phase_bytes[sender][phase] += nbytes
            self.phase_elements[sender][phase] += nelements

    def total_bytes(self) -> int:
        with self._lock:
            return sum(self.bytes_sent.values())

    def total_messages(self) -> int:
        with self._lock:
            return sum(self.messages_sent.values())

    def party_phase_bytes(self, party, phase: str) -> int:
        with self._lock:
            return self.phase_bytes[party][phase]

    def party_phase_elements(self, party, phase: str) -> int:
        with self._lock:
            return self.phase_elements[party][phase]

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "total_bytes": sum(self.bytes_sent.values()),
                "total_messages": sum(self.messages_sent.values()),
                "per_party": {
                    str(p): {
                        "bytes_sent": self.bytes_sent[p],
                        "messages_sent": self.messages_sent[p],
                        "elements_sent": self.elements_sent[p],
                        "phases": dict(self.phase_bytes[p]),
                    }
                    for p in sorted(self.bytes_sent, key=str)
                },
            }

    def to_json(self) -> str:
        return json.dumps(self.snapshot(), indent=2, sort_keys=True)
