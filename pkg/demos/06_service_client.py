"""Drive the HTTP service end to end: repair, accept, reuse.

Starts a throwaway server on a free port with a temp-file memory, so it
is safe to run repeatedly.

Run: python3 demos/06_service_client.py
"""

import os
import socket
import subprocess
import sys
import tempfile
import time

import requests

from scriptfix import chain, serialize_dot

with socket.socket() as probe:
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]

memory_path = os.path.join(tempfile.mkdtemp(), "memory.jsonl")
proc = subprocess.Popen(
    [sys.executable, "-m", "scriptfix", "serve", "--port", str(port)],
    env={**os.environ, "SCRIPTFIX_MEMORY_PATH": memory_path},
    stdout=subprocess.DEVNULL,
    stderr=subprocess.DEVNULL,
)
base = f"http://127.0.0.1:{port}"

try:
    for _ in range(100):
        try:
            requests.get(f"{base}/healthz", timeout=1)
            break
        except requests.RequestException:
            time.sleep(0.1)

    script = chain(
        "see an alligator",
        ["find the keys", "drive to the zoo", "get in car", "park the car", "walk to the enclosure"],
    )
    dot = serialize_dot(script)

    # a user complains; the keyword corrector turns it into an edit
    body = requests.post(f"{base}/repair", json={
        "script_dot": dot,
        "feedback": "Get in a car before driving",
    }).json()
    print(f"proposed edit: {body['edit']}")
    print(f"feedback came from: {body['feedback_source']}")

    # the user accepts, so the pair is banked
    accepted = requests.post(f"{base}/feedback", json={
        "script_dot": dot,
        "feedback": "Get in a car before driving",
        "edit": body["edit"],
    }).json()
    print(f"stored as record {accepted['record_id']}")

    # next time the same flawed script shows up, no one has to complain
    body = requests.post(f"{base}/repair", json={
        "script_dot": dot,
        "corrector": "retrieval",
    }).json()
    print(f"second visit: edit {body['edit']!r} from {body['feedback_source']} "
          f"(record {body['retrieved_id']}, similarity {body['similarity']:.2f})")

    print(f"memory size: {requests.get(f'{base}/healthz').json()['memory_size']}")
finally:
    proc.terminate()
    proc.wait(timeout=10)
