"""Unit tests for the artifact file helpers."""

import hashlib

from aquaseries.utils import atomic_write_bytes, atomic_write_text, sha256_bytes, sha256_file


def test_sha256_bytes_matches_hashlib():
    """Test that the digest is the hex SHA-256 of the input."""
    assert sha256_bytes(b"abc") == hashlib.sha256(b"abc").hexdigest()


def test_sha256_file_matches_contents(tmp_path):
    """Test that a file digest equals the digest of its bytes."""
    path = tmp_path / "data.bin"
    data = bytes(range(256)) * 1000
    path.write_bytes(data)
    assert sha256_file(path) == sha256_bytes(data)


def test_atomic_write_creates_parents(tmp_path):
    """Test that missing parent directories are created."""
    target = tmp_path / "a" / "b" / "out.txt"
    assert atomic_write_text(target, "x\n") == target
    assert target.read_bytes() == b"x\n"


def test_atomic_write_replaces_and_leaves_no_temp(tmp_path):
    """Test that an existing file is replaced without leftover temp files."""
    target = tmp_path / "out.bin"
    atomic_write_bytes(target, b"old")
    atomic_write_bytes(target, b"new")
    assert target.read_bytes() == b"new"
    assert [path.name for path in tmp_path.iterdir()] == ["out.bin"]
