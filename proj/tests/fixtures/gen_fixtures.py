#!/usr/bin/env python3
# Copyright (C) 2026 The amdet Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds the binary test fixtures under tests/fixtures/data/.

The ZIP containers come from Python's zipfile (an archiver implementation
independent of the C++ code under test). AXML and DEX blobs are emitted by
the independent writers below, working directly from the published chunk
formats. Certificates and PKCS#7 blocks come from the 'cryptography'
package. Outputs are committed; rerun this script only to regenerate them.
"""

import hashlib
import io
import os
import struct
import zipfile
import zlib
from datetime import datetime, timezone

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")

ANDROID_NS = "http://schemas.android.com/apk/res/android"

# ----------------------------------------------------------------------
# AXML writer


class Ref:
    def __init__(self, resid):
        self.resid = resid


class AxmlWriter:
    def __init__(self, utf8=False):
        self.utf8 = utf8
        self.strings = []
        self.index = {}

    def intern(self, s):
        if s not in self.index:
            self.index[s] = len(self.strings)
            self.strings.append(s)
        return self.index[s]

    def _encode_pool(self):
        offsets, data = [], b""
        for s in self.strings:
            offsets.append(len(data))
            if self.utf8:
                def enc(n):
                    return bytes([(n >> 8) | 0x80, n & 0xFF]) if n > 0x7F else bytes([n])
                raw = s.encode("utf-8")
                data += enc(len(s)) + enc(len(raw)) + raw + b"\x00"
            else:
                raw = s.encode("utf-16-le")
                n = len(raw) // 2
                assert n < 0x8000
                data += struct.pack("<H", n) + raw + b"\x00\x00"
        while len(data) % 4:
            data += b"\x00"
        header_size = 28
        strings_start = header_size + 4 * len(self.strings)
        flags = (1 << 8) if self.utf8 else 0
        size = strings_start + len(data)
        out = struct.pack("<HHIIIIII", 0x0001, header_size, size,
                          len(self.strings), 0, flags, strings_start, 0)
        out += b"".join(struct.pack("<I", o) for o in offsets)
        return out + data

    @staticmethod
    def _node(ctype, body):
        return struct.pack("<HHIII", ctype, 16, 16 + len(body), 1, 0xFFFFFFFF) + body

    def _start_element(self, name, attrs):
        attr_data = b""
        for (ns, aname), value in attrs:
            ns_idx = self.index[ns] if ns else 0xFFFFFFFF
            name_idx = self.index[aname]
            if isinstance(value, Ref):
                raw, dtype, data = 0xFFFFFFFF, 0x01, value.resid
            elif isinstance(value, bool):
                raw, dtype, data = 0xFFFFFFFF, 0x12, 0xFFFFFFFF if value else 0
            elif isinstance(value, int):
                raw, dtype, data = 0xFFFFFFFF, 0x10, value & 0xFFFFFFFF
            else:
                raw = self.index[value]
                dtype, data = 0x03, raw
            attr_data += struct.pack("<III", ns_idx, name_idx, raw)
            attr_data += struct.pack("<HBBI", 8, 0, dtype, data)
        ext = struct.pack("<IIHHHHHH", 0xFFFFFFFF, self.index[name],
                          20, 20, len(attrs), 0, 0, 0)
        return self._node(0x0102, ext + attr_data)

    def _end_element(self, name):
        return self._node(0x0103, struct.pack("<II", 0xFFFFFFFF, self.index[name]))

    def build(self, root):
        def intern_tree(node):
            name, attrs, children = node
            self.intern(name)
            for (ns, aname), value in attrs:
                if ns:
                    self.intern(ns)
                self.intern(aname)
                if isinstance(value, str):
                    self.intern(value)
            for child in children:
                intern_tree(child)

        self.intern("android")
        self.intern(ANDROID_NS)
        intern_tree(root)

        chunks = [self._node(0x0100, struct.pack(
            "<II", self.index["android"], self.index[ANDROID_NS]))]

        def emit(node):
            name, attrs, children = node
            chunks.append(self._start_element(name, attrs))
            for child in children:
                emit(child)
            chunks.append(self._end_element(name))

        emit(root)
        chunks.append(self._node(0x0101, struct.pack(
            "<II", self.index["android"], self.index[ANDROID_NS])))

        pool = self._encode_pool()
        body = pool + b"".join(chunks)
        return struct.pack("<HHI", 0x0003, 8, 8 + len(body)) + body


def perm(name):
    return ("uses-permission", [((ANDROID_NS, "name"), name)], [])


def manifest(package, children):
    return ("manifest", [((None, "package"), package)], children)


def build_manifest_sms(utf8=False):
    return AxmlWriter(utf8).build(manifest("com.example.sms", [
        perm("android.permission.SEND_SMS"),
        perm("android.permission.RECEIVE_SMS"),
        ("application", [], [
            ("activity", [((ANDROID_NS, "name"), ".MainActivity")], []),
        ]),
    ]))


def build_manifest_noperm():
    return AxmlWriter(utf8=True).build(manifest("com.example.plain", [
        ("application", [], [
            ("activity", [((ANDROID_NS, "name"), ".Main")], []),
        ]),
    ]))


def build_manifest_receiver_boot():
    return AxmlWriter().build(manifest("com.example.boot", [
        perm("android.permission.RECEIVE_BOOT_COMPLETED"),
        ("application", [], [
            ("receiver", [((ANDROID_NS, "name"), ".BootReceiver")], [
                ("intent-filter", [], [
                    ("action", [((ANDROID_NS, "name"),
                                 "android.intent.action.BOOT_COMPLETED")], []),
                ]),
            ]),
        ]),
    ]))


def build_manifest_order(order):
    perms = ["android.permission.SEND_SMS", "android.permission.READ_SMS",
             "android.permission.INTERNET"]
    if order == "b":
        perms = perms[::-1]
    return AxmlWriter().build(manifest("com.example.order",
                                       [perm(p) for p in perms] + [("application", [], [])]))


def build_manifest_resref():
    return AxmlWriter().build(manifest("com.example.resref", [
        ("uses-permission", [((ANDROID_NS, "name"), Ref(0x7F040001))], []),
        ("application", [((ANDROID_NS, "label"), Ref(0x7F050000))], []),
    ]))


def build_manifest_malicious():
    return AxmlWriter().build(manifest("com.example.mal", [
        perm("android.permission.SEND_SMS"),
        perm("android.permission.READ_CONTACTS"),
        ("application", [], [
            ("receiver", [((ANDROID_NS, "name"), ".BootReceiver")], [
                ("intent-filter", [], [
                    ("action", [((ANDROID_NS, "name"),
                                 "android.intent.action.BOOT_COMPLETED")], []),
                ]),
            ]),
        ]),
    ]))


# ----------------------------------------------------------------------
# DEX writer


def build_dex(method_refs, extra_strings=()):
    """method_refs: list of (class_descriptor, method_name)."""
    strings = set(extra_strings) | {"V"}
    types = {"V"}
    for cls, name in method_refs:
        strings.add(cls)
        strings.add(name)
        types.add(cls)
    strings = sorted(strings)
    str_idx = {s: i for i, s in enumerate(strings)}
    types = sorted(types, key=lambda t: str_idx[t])
    type_idx = {t: i for i, t in enumerate(types)}

    def uleb(n):
        out = b""
        while True:
            b7 = n & 0x7F
            n >>= 7
            out += bytes([b7 | (0x80 if n else 0)])
            if not n:
                return out

    header_size = 0x70
    string_ids_off = header_size
    type_ids_off = string_ids_off + 4 * len(strings)
    proto_ids_off = type_ids_off + 4 * len(types)
    method_ids_off = proto_ids_off + 12  # single ()V proto
    map_off = method_ids_off + 8 * len(method_refs)
    data_off = map_off + 4 + 12

    string_data, offsets = b"", []
    for s in strings:
        offsets.append(data_off + len(string_data))
        raw = s.encode("utf-8")  # fixtures are ASCII, MUTF-8 compatible
        string_data += uleb(len(s)) + raw + b"\x00"

    file_size = data_off + len(string_data)

    body = b"".join(struct.pack("<I", o) for o in offsets)
    body += b"".join(struct.pack("<I", str_idx[t]) for t in types)
    body += struct.pack("<III", str_idx["V"], type_idx["V"], 0)  # proto ()V
    refs = sorted((type_idx[cls], 0, str_idx[name]) for cls, name in method_refs)
    for class_i, proto_i, name_i in refs:
        body += struct.pack("<HHI", class_i, proto_i, name_i)
    body += struct.pack("<I", 1) + struct.pack("<HHII", 0x0000, 0, 1, 0)  # map
    body += string_data

    header_tail = struct.pack(
        "<IIIIIIIIIIIIIIIIIIII",
        file_size, header_size, 0x12345678,
        0, 0,            # link
        map_off,
        len(strings), string_ids_off,
        len(types), type_ids_off,
        1, proto_ids_off,
        0, 0,            # field_ids
        len(method_refs), method_ids_off if method_refs else 0,
        0, 0,            # class_defs
        len(string_data), data_off)

    partial = b"dex\n035\x00" + b"\x00" * 24 + header_tail + body
    signature = hashlib.sha1(partial[32:]).digest()
    with_sig = partial[:12] + signature + partial[32:]
    checksum = zlib.adler32(with_sig[12:]) & 0xFFFFFFFF
    final = with_sig[:8] + struct.pack("<I", checksum) + with_sig[12:]
    assert len(final) == file_size
    return final


# ----------------------------------------------------------------------
# v1 (JAR) signing


def wrap72(line):
    """Wrap a manifest logical line at 70 content bytes + continuations."""
    raw = line.encode("utf-8")
    if len(raw) <= 70:
        return [raw]
    chunks = [raw[:70]]
    raw = raw[70:]
    while raw:
        chunks.append(b" " + raw[:69])
        raw = raw[69:]
    return chunks


def jar_manifest(files):
    lines = [b"Manifest-Version: 1.0", b"Created-By: 1.0 (fixture-writer)", b""]
    for name, content in files.items():
        digest = hashlib.sha256(content).digest()
        b64 = __import__("base64").b64encode(digest).decode()
        for logical in (f"Name: {name}", f"SHA-256-Digest: {b64}"):
            lines.extend(wrap72(logical))
        lines.append(b"")
    return b"\r\n".join(lines) + b"\r\n"


def make_key_and_cert(cn, not_before, not_after, issuer=None):
    from cryptography import x509
    from cryptography.hazmat.primitives import hashes
    from cryptography.hazmat.primitives.asymmetric import rsa
    from cryptography.x509.oid import NameOID

    key = rsa.generate_private_key(public_exponent=65537, key_size=2048)
    subject = x509.Name([x509.NameAttribute(NameOID.COMMON_NAME, cn)])
    issuer_name, signing_key = subject, key
    if issuer is not None:
        issuer_name, signing_key = issuer
    cert = (x509.CertificateBuilder()
            .subject_name(subject)
            .issuer_name(issuer_name)
            .public_key(key.public_key())
            .serial_number(1000)
            .not_valid_before(not_before)
            .not_valid_after(not_after)
            .sign(signing_key, hashes.SHA256()))
    return key, cert


def pkcs7_block(data, key, cert):
    from cryptography.hazmat.primitives import hashes, serialization
    from cryptography.hazmat.primitives.serialization import pkcs7

    return (pkcs7.PKCS7SignatureBuilder()
            .set_data(data)
            .add_signer(cert, key, hashes.SHA256())
            .sign(serialization.Encoding.DER,
                  [pkcs7.PKCS7Options.DetachedSignature, pkcs7.PKCS7Options.Binary]))


def sign_v1(files, key, cert):
    mf = jar_manifest(files)
    sf_lines = [b"Signature-Version: 1.0", b""]
    mf_digest = __import__("base64").b64encode(hashlib.sha256(mf).digest()).decode()
    sf_lines.insert(1, f"SHA-256-Digest-Manifest: {mf_digest}".encode())
    sf = b"\r\n".join(sf_lines) + b"\r\n"
    signed = dict(files)
    signed["META-INF/MANIFEST.MF"] = mf
    signed["META-INF/CERT.SF"] = sf
    signed["META-INF/CERT.RSA"] = pkcs7_block(sf, key, cert)
    return signed


# ----------------------------------------------------------------------
# ZIP assembly


def write_zip(path, files, methods=None):
    methods = methods or {}
    with zipfile.ZipFile(path, "w") as zf:
        for name, content in files.items():
            info = zipfile.ZipInfo(name, date_time=(2020, 1, 1, 0, 0, 0))
            zf.writestr(info, content,
                        compress_type=methods.get(name, zipfile.ZIP_DEFLATED))
    with open(path, "rb") as f:
        return f.read()


def main():
    os.makedirs(OUT, exist_ok=True)

    def put(name, data):
        with open(os.path.join(OUT, name), "wb") as f:
            f.write(data)
        print(f"{name}: {len(data)} bytes")

    # standalone AXML blobs
    put("manifest_sms.axml", build_manifest_sms(utf8=False))
    put("manifest_sms_utf8.axml", build_manifest_sms(utf8=True))
    put("manifest_noperm.axml", build_manifest_noperm())
    put("manifest_receiver_boot.axml", build_manifest_receiver_boot())
    put("manifest_order_a.axml", build_manifest_order("a"))
    put("manifest_order_b.axml", build_manifest_order("b"))
    put("manifest_resref.axml", build_manifest_resref())

    # standalone DEX blobs
    dex_telephony = build_dex([
        ("Landroid/telephony/TelephonyManager;", "getDeviceId"),
        ("Lcom/example/mal/Main;", "<init>"),
    ])
    dex_crypto_reflect = build_dex([
        ("Ljavax/crypto/Cipher;", "getInstance"),
        ("Ljava/lang/reflect/Method;", "invoke"),
    ])
    dex_dexloader = build_dex([("Ldalvik/system/DexClassLoader;", "<init>")])
    dex_net = build_dex([("Ljava/net/URL;", "openConnection")])
    dex_plain = build_dex([
        ("Lcom/example/app/Main;", "<init>"),
        ("Ljava/lang/Object;", "<init>"),
    ])
    dex_empty = build_dex([], extra_strings=("unused",))
    put("classes_telephony.dex", dex_telephony)
    put("classes_crypto_reflect.dex", dex_crypto_reflect)
    put("classes_dexloader.dex", dex_dexloader)
    put("classes_net.dex", dex_net)
    put("classes_plain.dex", dex_plain)
    put("classes_empty.dex", dex_empty)

    # plain containers
    tiny = {"AndroidManifest.xml": build_manifest_noperm(), "classes.dex": dex_plain}
    data = write_zip(os.path.join(OUT, "tiny.apk"), tiny)
    with zipfile.ZipFile(io.BytesIO(data)) as zf:
        assert zf.namelist() == ["AndroidManifest.xml", "classes.dex"], zf.namelist()
    print(f"tiny.apk: {len(data)} bytes")

    write_zip(os.path.join(OUT, "stored_hi.zip"), {"greeting.txt": b"hi"},
              methods={"greeting.txt": zipfile.ZIP_STORED})
    print("stored_hi.zip written")

    payload_a = b"A" * 1024
    write_zip(os.path.join(OUT, "deflate_a1k.zip"), {"a.bin": payload_a})
    print("deflate_a1k.zip written")

    base_files = {
        "AndroidManifest.xml": build_manifest_noperm(),
        "classes.dex": dex_plain,
        "res/raw/data.bin": b"\x01\x02\x03\x04payload-data" * 4,
    }
    write_zip(os.path.join(OUT, "assets_plain.apk"), base_files)
    named = dict(base_files)
    named["assets/payload.apk"] = b"definitely not a real package"
    write_zip(os.path.join(OUT, "assets_named.apk"), named)
    magic = dict(base_files)
    magic["assets/data.bin"] = b"PK\x03\x04" + b"\x00" * 32
    write_zip(os.path.join(OUT, "assets_magic.apk"), magic)
    print("assets_[plain|named|magic].apk written")

    # manifest-only package, no classes*.dex at all
    write_zip(os.path.join(OUT, "nodex.apk"),
              {"AndroidManifest.xml": build_manifest_noperm()})
    print("nodex.apk written")

    # duplicate entry name: last central-directory occurrence wins
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        for content in (b"first version", b"second version"):
            info = zipfile.ZipInfo("dup.txt", date_time=(2020, 1, 1, 0, 0, 0))
            zf.writestr(info, content, compress_type=zipfile.ZIP_STORED)
    put("dup_name.zip", buf.getvalue())

    # bzip2-compressed entry: method 12 is unsupported in APKs
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        info = zipfile.ZipInfo("big.bin", date_time=(2020, 1, 1, 0, 0, 0))
        zf.writestr(info, b"x" * 256, compress_type=zipfile.ZIP_BZIP2)
    put("unsupported_method.zip", buf.getvalue())

    # stored entry with one flipped content byte: CRC mismatch at read
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as zf:
        info = zipfile.ZipInfo("note.txt", date_time=(2020, 1, 1, 0, 0, 0))
        zf.writestr(info, b"hello world", compress_type=zipfile.ZIP_STORED)
    raw = bytearray(buf.getvalue())
    at = raw.index(b"hello world")
    raw[at] ^= 0xFF
    put("bad_crc.zip", bytes(raw))

    # multidex
    multi = {
        "AndroidManifest.xml": build_manifest_noperm(),
        "classes.dex": dex_telephony,
        "classes2.dex": dex_net,
    }
    write_zip(os.path.join(OUT, "multidex.apk"), multi)
    print("multidex.apk written")

    # signed composite fixtures
    key, cert = make_key_and_cert("amdet fixture", datetime(2020, 1, 1, tzinfo=timezone.utc),
                                  datetime(2050, 1, 1, tzinfo=timezone.utc))
    long_name = ("assets/quite_long_directory_name_for_wrap/"
                 "deeply_nested_payload_with_a_rather_long_file_name.bin")
    mal_files = {
        "AndroidManifest.xml": build_manifest_malicious(),
        "classes.dex": dex_telephony,
        "classes2.dex": dex_crypto_reflect,
        "assets/payload.apk": write_zip(os.path.join(OUT, "_inner_tmp.zip"),
                                        {"inner.txt": b"nested package stand-in"}),
        long_name: b"Z" * 128,
    }
    os.remove(os.path.join(OUT, "_inner_tmp.zip"))
    signed = sign_v1(mal_files, key, cert)
    write_zip(os.path.join(OUT, "signed_clean.apk"), signed)
    print("signed_clean.apk written")

    tampered = dict(signed)
    flipped = bytearray(tampered["classes.dex"])
    flipped[-1] ^= 0x01
    tampered["classes.dex"] = bytes(flipped)
    write_zip(os.path.join(OUT, "signed_tampered.apk"), tampered)
    print("signed_tampered.apk written")

    write_zip(os.path.join(OUT, "unsigned.apk"), mal_files)
    print("unsigned.apk written")

    benign_files = {
        "AndroidManifest.xml": build_manifest_noperm(),
        "classes.dex": dex_plain,
    }
    write_zip(os.path.join(OUT, "benign_clean.apk"), sign_v1(benign_files, key, cert))
    print("benign_clean.apk written")

    key_exp, cert_exp = make_key_and_cert(
        "amdet expired", datetime(2020, 1, 1, tzinfo=timezone.utc),
        datetime(2021, 1, 1, tzinfo=timezone.utc))
    write_zip(os.path.join(OUT, "signed_expired.apk"), sign_v1(benign_files, key_exp, cert_exp))
    print("signed_expired.apk written")

    # standalone certificate material
    from cryptography.hazmat.primitives import serialization
    put("cert_valid_2020_2050.der", cert.public_bytes(serialization.Encoding.DER))
    ca_key, ca_cert = make_key_and_cert(
        "amdet fixture CA", datetime(2019, 1, 1, tzinfo=timezone.utc),
        datetime(2059, 1, 1, tzinfo=timezone.utc))
    _, issued = make_key_and_cert(
        "amdet issued leaf", datetime(2020, 1, 1, tzinfo=timezone.utc),
        datetime(2050, 1, 1, tzinfo=timezone.utc),
        issuer=(ca_cert.subject, ca_key))
    put("cert_ca_issued.der", issued.public_bytes(serialization.Encoding.DER))
    put("pkcs7_block.rsa", signed["META-INF/CERT.RSA"])

    print("all fixtures written to", OUT)


if __name__ == "__main__":
    main()
