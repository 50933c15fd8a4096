"""Two ways to cut a complex word.

Greedy WordPiece picks the longest vocabulary entry at each position, which
often fuses a prefix with the start of the stem.  Derivational segmentation
peels affixes off breadth-first until a known stem appears.
"""
from morphseg import check_validity, default_resources, segment_derivational, segment_wordpiece, serialize_delbert
from morphseg.derivational import Frontier, frontier_step

res = default_resources()
print(f"vocabulary: {len(res.vocab)} tokens, {len(res.affixes.prefixes)} prefixes, "
      f"{len(res.affixes.suffixes)} suffixes, {len(res.stems)} stems\n")

words = ["superbizarre", "applausive", "overseasoned", "isotopize", "promosque", "tribalize", "templatize"]
print(f"{'word':<15}{'WordPiece':<28}{'derivational':<22}stem intact?")
for w in words:
    wp = segment_wordpiece(w, res.vocab)
    ds = segment_derivational(w, res.affixes, res.stems)
    print(f"{w:<15}{str(wp):<28}{' '.join(serialize_delbert(ds, res.vocab)):<22}{check_validity(w, wp, ds)}")

# the search itself, one level at a time
frontier = Frontier.start("unlockable")
for depth in (1, 2):
    frontier = frontier_step(frontier, res.affixes, res.stems)
    print(f"\ndepth {depth}:", ", ".join(sorted(frontier.members())))

# spelling changes are undone on the way down and redone on the way up
seg = segment_derivational("happiness", res.affixes, res.stems)
print(f"\nhappiness -> stem {seg.stem!r}, suffixes {seg.suffixes}, rules {[r.value for r in seg.rules]}")
print("recomposed:", seg.compose())
