"""Schedulers that drive party programs over an in-process transport.

A party program is a generator that yields :class:`Send` and
:class:`Recv` effects and finally returns its local result.  Two
interchangeable schedulers execute the same programs:

* :func:`run_lockstep` advances parties round-robin on a single thread.
  Fully deterministic; the default for everything.
* :func:`run_threaded` gives each party its own thread which blocks on
  receive, so parties advance independently.

Channels are FIFO per (sender, receiver) pair and carry encoded bytes,
so both schedulers see identical message streams and must produce
identical results.
"""

from __future__ import annotations

import queue
import threading
from collections import defaultdict, deque

from privote.mpc.wire import CommCounter, Message, decode_message


class Send:
    __slots__ = ("dst", "msg")

    def __init__(self, dst, msg: Message):
        self.dst = dst
        self.msg = msg


class Recv:
    __slots__ = ("src", "tag")

    def __init__(self, src, tag: int):
        self.src = src
        self.tag = tag


class ProtocolError(RuntimeError):
    pass


def _emit(counter: CommCounter, transcript, src, dst, msg: Message) -> bytes:
    raw = msg.encode()
    counter.record(src, msg.tag, len(raw), msg.payload.size)
    if transcript is not None:
        transcript.append((src, dst, msg.tag, msg.payload.copy()))
    return raw


def _checked(raw: bytes, expect_tag: int, src, dst) -> Message:
    msg = decode_message(raw)
    if msg.tag != expect_tag:
        raise ProtocolError(
            f"party {dst} expected tag {expect_tag} from {src}, got {msg.tag}"
        )
    return msg


def run_lockstep(programs: dict, counter: CommCounter, transcript=None) -> dict:
    """Drive all programs to completion on one thread, round-robin."""
    chans: dict = defaultdict(deque)
    results: dict = {}
    waiting: dict = {}  # pid -> pending Recv effect
    alive = dict(programs)

    order = sorted(alive)
    while alive:
        progressed = False
        for pid in order:
            gen = alive.get(pid)
            if gen is None:
                continue
            # Advance this party until it blocks or finishes.
            feed = None
            while True:
                if pid in waiting:
                    eff = waiting[pid]
                    q = chans[(eff.src, pid)]
                    if not q:
                        break  # still blocked
                    feed = _checked(q.popleft(), eff.tag, eff.src, pid)
                    del waiting[pid]
                try:
                    eff = gen.send(feed)
                except StopIteration as stop:
                    results[pid] = stop.value
                    del alive[pid]
                    progressed = True
                    break
                feed = None
                progressed = True
                if isinstance(eff, Send):
                    chans[(pid, eff.dst)].append(
                        _emit(counter, transcript, pid, eff.dst, eff.msg)
                    )
                elif isinstance(eff, Recv):
                    waiting[pid] = eff
                else:
                    raise ProtocolError(f"unknown effect from party {pid}: {eff!r}")
        if alive and not progressed:
            stuck = {p: (w.src, w.tag) for p, w in waiting.items()}
            raise ProtocolError(f"deadlock; parties blocked on {stuck}")
    return results


def run_threaded(programs: dict, counter: CommCounter, transcript=None, timeout: float = 120.0) -> dict:
    """Run each program in its own thread with blocking receives."""
    chans: dict = defaultdict(queue.Queue)
    results: dict = {}
    errors: dict = {}
    lock = threading.Lock()

    def worker(pid, gen):
        feed = None
        try:
            while True:
                try:
                    eff = gen.send(feed)
                except StopIteration as stop:
                    with lock:
                        results[pid] = stop.value
                    return
                feed = None
                if isinstance(eff, Send):
                    raw = _emit(counter, transcript, pid, eff.dst, eff.msg)
                    chans[(pid, eff.dst)].put(raw)
                elif isinstance(eff, Recv):
                    raw = chans[(eff.src, pid)].get(timeout=timeout)
                    feed = _checked(raw, eff.tag, eff.src, pid)
                else:
                    raise ProtocolError(f"unknown effect from party {pid}: {eff!r}")
        except Exception as exc:  # noqa: BLE001 - propagated to the caller below
            with lock:
                errors[pid] = exc

    threads = [
        threading.Thread(target=worker, args=(pid, gen), daemon=True)
        for pid, gen in programs.items()
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join(timeout=timeout)
    if errors:
        pid, exc = sorted(errors.items(), key=lambda kv: str(kv[0]))[0]
        raise ProtocolError(f"party {pid} failed: {exc}") from exc
    if len(results) != len(programs):
        raise ProtocolError("threaded run did not complete (deadlock or timeout)")
    return results
