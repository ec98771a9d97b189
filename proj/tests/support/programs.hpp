#ifndef STABLEREL_TESTS_PROGRAMS_HPP
#define STABLEREL_TESTS_PROGRAMS_HPP

// Shared program sources used across suites.

namespace testprog {

inline const char* kUnsat = R"((defineo (a) succeed)
(defineo (b) succeed)
(defineo (p) (a) (noto (p)))
)";

inline const char* kRevo = R"((defineo (revo xs sx)
  (fresh (empty) (nullo empty) (rev-acco xs empty sx)))
(defineo (rev-acco xs acc sx)
  (conde [(nullo xs) (== sx acc)]
         [(fresh (h t acc1)
            (conso h t xs) (conso h acc acc1) (rev-acco t acc1 sx))]))
)";

inline const char* kGame = R"((defineo (move x y)
  (conde [(== x 'b) (== y 'c)] [(== x 'a) (== y 'b)]
         [(== x 'b) (== y 'a)] [(== x 'c) (== y 'd)]))
(defineo (win x) (fresh (y) (move x y) (noto (win y))))
)";

inline const char* kFinalScc = R"((defineo (edge x y)
  (conde
    [(== x 'a) (== y 'b)] [(== x 'b) (== y 'c)] [(== x 'c) (== y 'd)]
    [(== x 'd) (== y 'e)] [(== x 'e) (== y 'c)] [(== x 'a) (== y 'f)]
    [(== x 'f) (== y 'h)] [(== x 'f) (== y 'g)] [(== x 'g) (== y 'f)]
    [(== x 'g) (== y 'k)] [(== x 'h) (== y 'i)] [(== x 'i) (== y 'h)]))
(defineo (reachable x y)
  (conde [(edge x y)]
         [(fresh (z) (edge x z) (reachable z y))]))
(defineo (reducible x)
  (conde [(fresh (y) (reachable x y) (noto (reachable y x)))]))
(defineo (fullyReduce x y)
  (conde [(reachable x y) (noto (reducible y))]))
)";

inline const char* kFinalSccQuery =
    "(run* (q) (fresh (x y) (fullyReduce x y) (== q `(,x ,y))))";
inline const char* kFinalSccQueryPartial =
    "(run-partial #f (q) (fresh (x y) (fullyReduce x y) (== q `(,x ,y))))";

} // namespace testprog

#endif
