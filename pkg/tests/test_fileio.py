import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from staircase.codes import hermitian_q4_family, hermitian_curve, hermitian_nested, rs_family
from staircase.fileio import (FormatError, ShareFile, blocks_to_bytes, build_from_descriptor,
                              bytes_to_blocks, digits_per_byte, hermitian_q4_descriptor,
                              family_from_text, family_to_text, parse_descriptor,
                              parse_share_file, read_bundle, share_file_text, write_bundle)
from staircase.scheme_c1 import c1_setup
from staircase.scheme_c2 import c2_setup

RS13 = """# RS over GF(13), construction 2
family = rs
q = 13
n = 12
dims = 2,6,8,12
construction = 2
deltas = 12,8,6
"""


@pytest.fixture(scope="module")
def ex2():
    return c1_setup(hermitian_q4_family())


def test_digits_per_byte():
    assert [digits_per_byte(q) for q in (2, 3, 4, 13, 16, 256, 257)] == [8, 6, 4, 3, 2, 1, 1]


def test_empty_secret_is_prefix_only(ex2):
    blocks = bytes_to_blocks(b"", ex2)
    # 4 prefix bytes, 4 GF(4) digits each, 2 symbols per block
    assert len(blocks) == 8
    assert not np.concatenate(blocks).any()
    assert blocks_to_bytes(blocks, 4) == b""


def test_hermitian_q4_payload_per_block(ex2):
    assert ex2.alpha * ex2.ell == 2
    assert len(bytes_to_blocks(b"ab", ex2)) == (4 + 2) * 4 // 2


@settings(max_examples=40, deadline=None)
@given(st.binary(max_size=64), st.sampled_from([2, 4, 5, 13]))
def test_bytes_roundtrip(data, q):
    fam = rs_family(q, q - 1, (0, 1, 2)) if q > 3 else None
    inst = c1_setup(fam) if fam else c1_setup(hermitian_q4_family())
    assert blocks_to_bytes(bytes_to_blocks(data, inst), inst.field.q) == data


def test_corrupt_prefix(ex2):
    blocks = bytes_to_blocks(b"hi", ex2)
    # the first length byte becomes 255, claiming far more data than present
    blocks[0] = np.array([[3], [3]])
    blocks[1] = np.array([[3], [3]])
    with pytest.raises(FormatError):
        blocks_to_bytes(blocks, 4)
    with pytest.raises(FormatError):
        blocks_to_bytes(blocks[:1], 4)


@pytest.mark.parametrize("fam", [hermitian_q4_family(), rs_family(13, 12, (2, 6, 8)),
                                 hermitian_nested(hermitian_curve(2), (2, 3, 4))])
def test_family_roundtrip(fam):
    back = family_from_text(family_to_text(fam))
    assert back.dims == fam.dims and back.kind == fam.kind
    assert np.array_equal(back.generator.a, fam.generator.a)
    assert back.degrees == fam.degrees and back.genus == fam.genus
    assert back.points == fam.points


def test_descriptor_hermitian_q4():
    built = build_from_descriptor(parse_descriptor(hermitian_q4_descriptor()))
    s = built.scheme
    assert (s.n, s.t, s.r, s.deltas) == (8, 1, 4, (5, 4))


def test_descriptor_rs13():
    s = build_from_descriptor(parse_descriptor(RS13)).scheme
    assert (s.alpha, s.deltas) == (60, (12, 8, 6))


@pytest.mark.parametrize("text,key", [
    ("family = rs\nq = 13\nn = 12\ndims = 2,6\nbogus = 1\n", "bogus"),
    ("family = rs\nq = 12\nn = 5\ndims = 2,3\n", "q"),
    ("family = explicit-matrix\nfield p=2 m=2 mod=1,0,1\ndims = 1,2\nmatrix 2 2\n1 0\n0 1\n", "field"),
    ("family = explicit-matrix\nfield p=2 m=x mod=1,1,1\ndims = 1,2\n", "field"),
    ("family = rs\nq = 13\nn = twelve\ndims = 2,6\n", "n"),
    ("family = rs\nq = 13\nn = 12\n", "dims"),
    ("family = nope\n", "family"),
])
def test_descriptor_errors_name_the_key(text, key):
    with pytest.raises(FormatError, match=f"'{key}'"):
        build_from_descriptor(parse_descriptor(text))


def test_bundle_roundtrip(tmp_path):
    for idx, text in enumerate((hermitian_q4_descriptor(), RS13,
                 "family = massey-rs\nq = 11\nn = 8\nt = 3\nr = 5\ndeltas = 5,7\n",
                 "family = hermitian\nu = 2\ndegrees = 2,3,4\nconstruction = 2\n")):
        built = build_from_descriptor(parse_descriptor(text))
        d = tmp_path / f"bundle{idx}"
        write_bundle(d, built, text)
        back = read_bundle(d)
        s, b = built.scheme, back.scheme
        assert type(s) is type(b)
        assert (s.n, s.ell, s.alpha, s.t, s.r, s.deltas) == (b.n, b.ell, b.alpha, b.t, b.r, b.deltas)
        assert np.array_equal(s.G.a, b.G.a)
        assert (built.massey is None) == (back.massey is None)


def test_share_file_roundtrip(ex2):
    sf = ShareFile(3, np.array([[1, 2], [3, 0], [0, 0]]))
    back = parse_share_file(share_file_text(ex2, sf), ex2)
    assert back.party == 3 and back.level is None
    assert np.array_equal(back.blocks, sf.blocks)
    prep = ShareFile(0, np.array([[1], [2]]), level=1)
    back = parse_share_file(share_file_text(ex2, prep), ex2)
    assert back.level == 1 and back.blocks.shape == (2, 1)


def test_share_file_rejects_mismatch(ex2):
    other = c2_setup(rs_family(13, 12, (2, 6, 8, 12)))
    text = share_file_text(ex2, ShareFile(0, np.array([[1, 2]])))
    with pytest.raises(FormatError):
        parse_share_file(text, other)
    with pytest.raises(FormatError):
        parse_share_file(text.replace("1 2\n", "1 7\n"), ex2)
    with pytest.raises(FormatError):
        parse_share_file(text.replace("blocks 1", "blocks 2"), ex2)
