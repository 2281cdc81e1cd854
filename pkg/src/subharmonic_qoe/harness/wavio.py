"""Minimal RIFF/WAVE reader and writer (mono PCM16 and IEEE float32)."""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import WavFormatError
from ..signal import Waveform

__all__ = ["ingest_wav", "write_wav"]

_PCM = 1
_FLOAT = 3
_EXTENSIBLE = 0xFFFE


def _chunks(data: bytes, path):
    pos = 12
    while pos < len(data):
        if pos + 8 > len(data):
            raise WavFormatError(f"{path}: truncated chunk header at byte {pos}")
        cid, size = struct.unpack("<4sI", data[pos:pos + 8])
        body = data[pos + 8:pos + 8 + size]
        yield cid, size, body
        pos += 8 + size + (size & 1)


def ingest_wav(path) -> Waveform:
    """Read a mono WAV file into a waveform normalised to [-1, 1].

    PCM 16-bit samples are divided by 32768, so -32768 maps to exactly -1.0.
    """
    path = Path(path)
    data = path.read_bytes()
    if len(data) < 12:
        raise WavFormatError(f"{path}: file too short for a RIFF header")
    riff, _, wave = struct.unpack("<4sI4s", data[:12])
    if riff != b"RIFF" or wave != b"WAVE":
        raise WavFormatError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    samples = None
    for cid, size, body in _chunks(data, path):
        if cid == b"fmt ":
            if len(body) < 16:
                raise WavFormatError(f"{path}: truncated 'fmt ' chunk")
            tag, channels, rate, _, _, bits = struct.unpack("<HHIIHH", body[:16])
            if tag == _EXTENSIBLE and len(body) >= 26:
                tag = struct.unpack("<H", body[24:26])[0]
            fmt = (tag, channels, rate, bits)
        elif cid == b"data":
            if fmt is None:
                raise WavFormatError(f"{path}: 'data' chunk precedes the 'fmt ' chunk")
            if len(body) < size:
                raise WavFormatError(
                    f"{path}: truncated 'data' chunk ({len(body)} of {size} bytes present)"
                )
            samples = body
    if fmt is None:
        raise WavFormatError(f"{path}: missing 'fmt ' chunk")
    if samples is None:
        raise WavFormatError(f"{path}: missing 'data' chunk")

    tag, channels, rate, bits = fmt
    if channels != 1:
        raise WavFormatError(f"{path}: {channels} channels; only mono is supported")
    if tag == _PCM and bits == 16:
        x = np.frombuffer(samples[: len(samples) // 2 * 2], dtype="<i2").astype(float) / 32768.0
    elif tag == _FLOAT and bits == 32:
        x = np.frombuffer(samples[: len(samples) // 4 * 4], dtype="<f4").astype(float)
    else:
        raise WavFormatError(f"{path}: unsupported encoding (format tag {tag}, {bits} bits)")
    if x.size == 0:
        raise WavFormatError(f"{path}: 'data' chunk holds no samples")
    return Waveform(x, rate)


def write_wav(path, wave: Waveform, encoding: str = "pcm16") -> None:
    """Write ``wave`` as mono ``pcm16`` (clipped to [-1, 1)) or ``float32``."""
    if encoding == "pcm16":
        q = np.clip(np.round(wave.samples * 32768.0), -32768, 32767).astype("<i2")
        tag, bits = _PCM, 16
    elif encoding == "float32":
        q = wave.samples.astype("<f4")
        tag, bits = _FLOAT, 32
    else:
        raise ValueError(f"unknown encoding {encoding!r}")
    payload = q.tobytes()
    block = bits // 8
    fmt = struct.pack("<HHIIHH", tag, 1, wave.rate, wave.rate * block, block, bits)
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) & 1:
        body += b"\0"
    Path(path).write_bytes(b"RIFF" + struct.pack("<I", len(body)) + body)
