import pytest

from rileyslice.words import (Letter, Slope, enumerate_slopes, farey_word,
                              word_report)

# the nine golden rows: slope -> ASCII word (uppercase = inverse)
TABLE_WORDS = {
    (1, 2): "xyXY",
    (4, 7): "xyXYxyXyxYXyxY",
    (3, 5): "xyXYxYXyxY",
    (5, 8): "xyXYxYXyXYxyXyxY",
    (2, 3): "xyXyxY",
    (5, 7): "xyXyxYxYXyXYxY",
    (3, 4): "xyXyXYxY",
    (4, 5): "xyXyXyxYxY",
    (1, 1): "xY",
}


@pytest.mark.parametrize("pq,expected", sorted(TABLE_WORDS.items()))
def test_golden_words(pq, expected):
    assert str(farey_word(Slope(*pq))) == expected


def test_slope_validation():
    with pytest.raises(ValueError):
        Slope(2, 4)
    with pytest.raises(ValueError):
        Slope(3, 2)
    with pytest.raises(ValueError):
        Slope(0, 1)
    assert str(Slope.parse(" 3/4 ")) == "3/4"
    with pytest.raises(ValueError):
        Slope.parse("3:4")


def test_enumerate_slopes():
    assert [str(s) for s in enumerate_slopes(1)] == ["1/1"]
    assert [str(s) for s in enumerate_slopes(2)] == ["1/1", "1/2"]
    assert [str(s) for s in enumerate_slopes(3)] == ["1/1", "1/2", "1/3", "2/3"]
    sl = enumerate_slopes(30)
    assert len(sl) == len(set(sl))
    qs = [s.q for s in sl]
    assert qs == sorted(qs)
    with pytest.raises(ValueError):
        enumerate_slopes(0)


def test_length_and_alternation_up_to_100():
    for s in enumerate_slopes(100):
        w = farey_word(s)
        assert len(w) == 2 * s.q
        assert word_report(w).alternating


def test_word_reports():
    r = word_report(farey_word(Slope(1, 2)))
    assert (r.length, r.x_exponent_sum, r.y_exponent_sum) == (4, 0, 0)
    r = word_report(farey_word(Slope(1, 1)))
    assert (r.length, r.x_exponent_sum, r.y_exponent_sum) == (2, 1, -1)
    r = word_report(farey_word(Slope(2, 3)))
    assert (r.length, r.x_exponent_sum, r.y_exponent_sum) == (6, 1, 1)


def test_letter_roundtrip():
    for ch in "xXyY":
        assert Letter.from_char(ch).to_char() == ch
    assert Letter("x", -1).inverse() == Letter("x", 1)
    with pytest.raises(ValueError):
        Letter.from_char("z")
