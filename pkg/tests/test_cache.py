from modlat.cache import clear_cache, list_cache, load_cached, model_key, save_instance
from modlat.models import load_model

SPEC = "gl(n=2, ring=Z/4)"


def test_miss_then_hit(tmp_path):
    first = load_cached(SPEC, root=tmp_path)
    entries = list_cache(tmp_path)
    assert len(entries) == 1 and entries[0]["complete"]
    assert entries[0]["spec"] == "gl(n=2,ring=Z/4)"
    again = load_cached(SPEC, root=tmp_path)
    assert again.G.digest() == first.G.digest()
    assert again.atoms == first.atoms and again.H.order == first.H.order
    assert again.action.kernel_order == first.action.kernel_order


def test_key_ignores_whitespace():
    assert model_key(SPEC) == model_key("gl(n=2,ring=Z/4)")
    assert model_key(SPEC) != model_key("gl(n=2,ring=Z/9)")


def test_corrupt_entry_is_rebuilt(tmp_path):
    inst = load_model(SPEC)
    d = save_instance(inst, SPEC, tmp_path)
    group = d / "group"
    group.write_text(group.read_text().replace("0 1 2", "0 2 1", 1))
    rebuilt = load_cached(SPEC, root=tmp_path)
    assert rebuilt.G.digest() == inst.G.digest()
    # the rebuild rewrote a valid entry
    assert load_cached(SPEC, root=tmp_path).G.digest() == inst.G.digest()


def test_mismatched_frame_is_rebuilt(tmp_path):
    inst = load_model(SPEC)
    d = save_instance(inst, SPEC, tmp_path)
    (d / "frame").write_text((d / "frame").read_text().replace("lattice=", "lattice=0"))
    assert load_cached(SPEC, root=tmp_path).G.order == inst.G.order


def test_no_cache_and_fixtures_skip_disk(tmp_path):
    load_cached(SPEC, use_cache=False, root=tmp_path)
    load_cached("m4-swap", root=tmp_path)
    assert list_cache(tmp_path) == []


def test_clear(tmp_path):
    load_cached(SPEC, root=tmp_path)
    load_cached("gl(n=1,ring=F7)", root=tmp_path)
    assert clear_cache(tmp_path) == 2
    assert list_cache(tmp_path) == []
    assert list_cache(tmp_path / "missing") == []
