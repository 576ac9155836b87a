"""Byte-exact encodings of every protocol object (``.vhss`` files).

Envelope: magic ``2SVHSS\\0`` | version u16 LE | kind u8 | SHA-256 of the
canonical params encoding | payload. Ring elements are fixed-width
little-endian coefficient arrays, ⌈bitlen(q)/8⌉ bytes per coefficient
(⌈bitlen(r)/8⌉ for partial results). Decoding is strict: every byte must be
consumed and every value must be in canonical form.
"""
from __future__ import annotations

import hashlib
import math
import struct

from .errors import DecodeError, VhssError
from .params import Params
from .pke import Ciphertext, KdmCiphertext, PublicKey
from .program import Program, parse_program
from .ring import RingElement
from .sampling import PRF_KEY_BYTES
from .scheme import EvaluationKey, PartialResult, VerificationKey

MAGIC = b"2SVHSS\0"
VERSION = 1
KIND_PARAMS, KIND_PK, KIND_VK, KIND_EK, KIND_CT, KIND_PARTIAL, KIND_PROGRAM = range(7)
KIND_NAMES = {KIND_PARAMS: "params", KIND_PK: "pk", KIND_VK: "vk", KIND_EK: "ek",
              KIND_CT: "ct", KIND_PARTIAL: "partial", KIND_PROGRAM: "program"}
_HEADER = struct.Struct("<7sHB32s")

_INT_FIELDS = ("n", "p", "q", "r", "h_sk", "b_sk", "b_err", "b_ct", "b_add", "b_max", "kappa")


def _put_int(v: int) -> bytes:
    raw = v.to_bytes((v.bit_length() + 7) // 8, "little")
    return struct.pack("<H", len(raw)) + raw


def params_bytes(params: Params) -> bytes:
    out = [_put_int(getattr(params, name)) for name in _INT_FIELDS]
    out.append(struct.pack("<d", float(params.sigma)))
    if params.security is None:
        out.append(b"\0")
    else:
        out.append(b"\1" + struct.pack("<d", float(params.security)))
    return b"".join(out)


def params_digest(params: Params) -> bytes:
    return hashlib.sha256(params_bytes(params)).digest()


class _Reader:
    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def take(self, n: int) -> bytes:
        if n < 0 or self.pos + n > len(self.data):
            raise DecodeError("truncated payload")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def f64(self) -> float:
        v = struct.unpack("<d", self.take(8))[0]
        if not math.isfinite(v):
            raise DecodeError("non-finite float")
        return v

    def int_(self) -> int:
        length = struct.unpack("<H", self.take(2))[0]
        raw = self.take(length)
        if length and raw[-1] == 0:
            raise DecodeError("non-canonical integer (leading zero byte)")
        return int.from_bytes(raw, "little")

    def element(self, n: int, modulus: int) -> RingElement:
        width = coeff_width(modulus)
        raw = self.take(n * width)
        vals = tuple(int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(n))
        if any(v >= modulus for v in vals):
            raise DecodeError("non-canonical coefficient (>= modulus)")
        return RingElement._raw(vals, modulus)

    def done(self) -> None:
        if self.pos != len(self.data):
            raise DecodeError(f"{len(self.data) - self.pos} trailing bytes")


def coeff_width(modulus: int) -> int:
    return (modulus.bit_length() + 7) // 8


def _element(a: RingElement) -> bytes:
    width = coeff_width(a.modulus)
    return b"".join(c.to_bytes(width, "little") for c in a.coeffs)


def _decode_params(rd: _Reader) -> Params:
    vals = {name: rd.int_() for name in _INT_FIELDS}
    vals["sigma"] = rd.f64()
    flag = rd.u8()
    if flag not in (0, 1):
        raise DecodeError("bad security flag")
    vals["security"] = rd.f64() if flag else None
    try:
        return Params(**vals)
    except VhssError as exc:
        raise DecodeError(f"invalid params: {exc}") from None


def _kind_of(obj) -> int:
    for kind, cls in ((KIND_PARAMS, Params), (KIND_PK, PublicKey), (KIND_VK, VerificationKey),
                      (KIND_EK, EvaluationKey), (KIND_CT, KdmCiphertext),
                      (KIND_PARTIAL, PartialResult), (KIND_PROGRAM, Program)):
        if isinstance(obj, cls):
            return kind
    raise TypeError(f"cannot encode {type(obj).__name__}")


def encode(obj, params: Params | None = None) -> bytes:
    """Serialize ``obj``. ``params`` is needed for ciphertexts, partials and programs."""
    kind = _kind_of(obj)
    if kind == KIND_PARAMS:
        params = obj
    elif kind in (KIND_PK, KIND_VK, KIND_EK):
        params = obj.params
    elif params is None:
        raise TypeError(f"encoding a {KIND_NAMES[kind]} requires params")
    if kind == KIND_PARAMS:
        payload = params_bytes(obj)
    elif kind == KIND_PK:
        payload = _element(obj.a) + _element(obj.b)
    elif kind == KIND_VK:
        payload = _element(obj.s_hat) + _element(obj.s_hat_s)
    elif kind == KIND_EK:
        payload = (bytes([obj.server]) + obj.k1 + obj.k2
                   + b"".join(_element(e) for e in (*obj.sk_share, *obj.vk_share)))
    elif kind == KIND_CT:
        payload = struct.pack("<I", obj.weight) + b"".join(_element(e) for e in obj.entries())
    elif kind == KIND_PARTIAL:
        payload = _element(obj.t) + _element(obj.tau)
    else:
        text = obj.to_text().encode()
        payload = struct.pack("<I", len(text)) + text
    return _HEADER.pack(MAGIC, VERSION, kind, params_digest(params)) + payload


def peek_kind(data: bytes) -> int:
    if len(data) < _HEADER.size:
        raise DecodeError("truncated header")
    magic, version, kind, _ = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise DecodeError("bad magic")
    if version != VERSION:
        raise DecodeError(f"unsupported version {version}")
    if kind not in KIND_NAMES:
        raise DecodeError(f"unknown kind {kind}")
    return kind


def decode(data: bytes, params: Params | None = None, expect: int | None = None):
    """Parse bytes produced by :func:`encode`.

    Everything except a params object needs the matching ``params``; the
    digest in the header must agree with it.
    """
    kind = peek_kind(data)
    if expect is not None and kind != expect:
        raise DecodeError(f"expected a {KIND_NAMES[expect]} object, got {KIND_NAMES[kind]}")
    digest = data[_HEADER.size - 32:_HEADER.size]
    rd = _Reader(data, _HEADER.size)
    if kind == KIND_PARAMS:
        obj = _decode_params(rd)
        rd.done()
        if params_digest(obj) != digest:
            raise DecodeError("params digest mismatch")
        return obj
    if params is None:
        raise DecodeError(f"decoding a {KIND_NAMES[kind]} requires params")
    if params_digest(params) != digest:
        raise DecodeError("params digest mismatch")
    n, q = params.n, params.q
    if kind == KIND_PK:
        obj = PublicKey(params, rd.element(n, q), rd.element(n, q))
    elif kind == KIND_VK:
        obj = VerificationKey(params, rd.element(n, q), rd.element(n, q))
    elif kind == KIND_EK:
        server = rd.u8()
        if server not in (1, 2):
            raise DecodeError(f"bad server index {server}")
        k1, k2 = rd.take(PRF_KEY_BYTES), rd.take(PRF_KEY_BYTES)
        e = [rd.element(n, q) for _ in range(4)]
        obj = EvaluationKey(params, server, k1, k2, (e[0], e[1]), (e[2], e[3]))
    elif kind == KIND_CT:
        weight = rd.u32()
        if weight < 1:
            raise DecodeError("ciphertext weight must be >= 1")
        e = [rd.element(n, q) for _ in range(4)]
        obj = KdmCiphertext(Ciphertext(e[0], e[1]), Ciphertext(e[2], e[3]), weight)
    elif kind == KIND_PARTIAL:
        obj = PartialResult(rd.element(n, params.r), rd.element(n, params.r))
    else:
        raw = rd.take(rd.u32())
        try:
            text = raw.decode()
            obj = parse_program(text)
        except (UnicodeDecodeError, VhssError) as exc:
            raise DecodeError(f"bad program text: {exc}") from None
        if obj.to_text() != text:
            raise DecodeError("non-canonical program text")
    rd.done()
    return obj


def write_file(path, obj, params: Params | None = None) -> None:
    with open(path, "wb") as fh:
        fh.write(encode(obj, params))


def read_file(path, params: Params | None = None, expect: int | None = None):
    with open(path, "rb") as fh:
        return decode(fh.read(), params, expect)
