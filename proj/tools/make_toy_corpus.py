# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/toy_train.txt and data/toy_test.txt.

Run from the repository root:  python3 tools/make_toy_corpus.py [test_seed]

The corpus is built for the reduction in data/toy_rho.tsv (c,k,g -> k and
vowels -> a).  The vocabulary is chosen so that, apart from three designed
merge families ({the,thi,tha,tho,thu}, {is,as,us}, {came,game}), every word
keeps a distinct reduced image, and content words within the same sentence
slot stay at reduced-image edit distance >= 3 of each other.  The training
text is a deterministic template grid plus respelled-variant batches plus
seeded random filler; the test text is 800 lines sampled from the same
templates with an independent seed (default 99).
"""
import random, sys

def rho(g):
    if g in 'ckg': return 'k'
    if g in 'aeiou': return 'a'
    return g
def img(w): return ''.join(rho(c) for c in w)

subjects = ["goat","bird","horse","tiger","rabbit","snake","stork","otter","mole","hound"]
places   = ["lake","road","hill","bridge","market","castle","garden","stream","island","desert"]
things   = ["drum","stone","ladder","hammer","marble","lantern","saddle","blanket","goblet","bodel"]
adjs     = ["big","cold","clean","smart","bright","silent","rusted","little","distant","modest"]
vi       = ["runs","stands","climbs","dances","tumbles"]
vt       = ["holds","counts","shakes","gathers","trades"]
preps    = ["near","under","on"]
variants = {"the":["thi","tha","tho","thu"], "is":["as","us"]}
for b,vs in variants.items():
    for v in vs:
        assert img(v)==img(b) and len(v)==len(b) and sum(x!=y for x,y in zip(b,v))==1, (b,v)

# Outside the designed merge families (the-respellings, is-respellings,
# came/game), every vocabulary word keeps a distinct reduced image.
content = subjects+places+things+adjs+vi+vt+preps+["the","is","a","came","to","game"]
imgs = [img(w) for w in content]
dup = {i for i in imgs if imgs.count(i)>1}
assert dup == {"kama"}, dup   # came/game only

t3 = [f"the {s} {v} {preps[(i+j)%3]} the {places[(i*3+j)%10]}"
      for i,s in enumerate(subjects) for j,v in enumerate(vi)]
t5 = [f"the {s} {v} the {things[(i*3+j)%10]}"
      for i,s in enumerate(subjects) for j,v in enumerate(vt)]
t2 = [f"the {subjects[i]} came to the {p}" for i,p in enumerate(places)]
t4 = [f"the {th} is {adjs[(i+j*7)%10]}" for i,th in enumerate(things) for j in range(2)]
t6 = [f"a {s} {vt[i%5]} a {things[i]}" for i,s in enumerate(subjects)] + \
     [f"a {s} {vt[(i+2)%5]} a {things[(i+5)%10]}" for i,s in enumerate(subjects)]
t7 = [f"the {s} {vi[i%5]}" for i,s in enumerate(subjects)]
t0 = ["the game is on"]*4 + ["game is on"]*2
grid = t3+t5+t2+t4+t6+t7+t0
assert len(grid)==166

def swap(line, old, new, which=0):
    toks = line.split()
    idx = [k for k,w in enumerate(toks) if w==old][which]
    toks[idx] = new
    return " ".join(toks)

def covering(lines, key):
    chosen, seen = [], set()
    for l in lines:
        k = key(l)
        if k not in seen:
            chosen.append(l); seen.add(k)
    assert len(chosen) == 10, (len(chosen), sorted(seen))
    return chosen

second = lambda l: l.split()[1]
t4_j0 = t4[0::2]; t4_j1 = t4[1::2]
t3_first = covering(t3[0::5], second)
t5_first = covering(t5[0::5], second)

# Respelled copies sit only in subject-adjacent windows, where the base
# spelling is attested across many templates.
batches  = [swap(l,"the","tha") for l in t3_first]*2
batches += [swap(l,"the","thi") for l in t5_first]*2
batches += [swap(l,"the","tho") for l in t2]*2
batches += [swap(l,"the","thu") for l in t7]*2
batches += [swap(l,"is","as") for l in t4_j1]
batches += [swap(l,"is","us") for l in t4_j0]
batches += ["game as on","game us on"]
assert len(batches)==102, len(batches)


def sentence(r):
    t = r.choices(range(8), weights=[3,2,8,8,8,6,4,4])[0]
    if t == 0: return ["the","game","is","on"]
    if t == 1: return ["game","is","on"]
    if t == 2: return ["the",r.choice(subjects),"came","to","the",r.choice(places)]
    if t == 3: return ["the",r.choice(subjects),r.choice(vi),r.choice(preps),"the",r.choice(places)]
    if t == 4: return ["the",r.choice(things),"is",r.choice(adjs)]
    if t == 5: return ["the",r.choice(subjects),r.choice(vt),"the",r.choice(things)]
    if t == 6: return ["a",r.choice(subjects),r.choice(vt),"a",r.choice(things)]
    return ["the",r.choice(subjects),r.choice(vi)]

rcov = random.Random(777)
train = grid*2 + batches
while len(train) < 500:
    train.append(" ".join(sentence(rcov)))
assert len(train)==500, len(train)

rt = random.Random(20240815)
rt.shuffle(train)
re_ = random.Random(int(sys.argv[1]) if len(sys.argv)>1 else 99)
test = [" ".join(sentence(re_)) for _ in range(800)]
tw = set(w for s in train for w in s.split())
assert set(w for s in test for w in s.split()) <= tw
missing = [v for vs in variants.values() for v in vs if v not in tw]
print("train:",len(train),"vocab:",len(tw),"missing:",missing,
      "| plain 'game is on':",sum(1 for s in train if "game is on" in s))
with open('data/toy_train.txt','w') as f: f.write("\n".join(train)+"\n")
with open('data/toy_test.txt','w') as f: f.write("\n".join(test)+"\n")
