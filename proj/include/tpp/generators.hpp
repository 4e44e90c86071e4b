#ifndef TPP_GENERATORS_HPP
#define TPP_GENERATORS_HPP

#include <sstream>
#include <string>
#include <vector>

#include "tpp/rational.hpp"

// PDDL generators for the benchmark families with required concurrency:
// pour (the bottle domain: pouring needs both bottles uncapped, bottles
// re-cap themselves), shake, pack, bottles (the union) and a
// matchcellar-style domain for lasting-condition stress. Reconstructions of
// the published one-line domain descriptions; exact IPC instances live
// elsewhere.

namespace tpp {

struct GenSpec {
  std::string family = "pour";
  int p = 1;  // pour/bottles: source bottles
  int q = 2;  // bottles total
  std::vector<Rat> litres;  // per source; missing entries default to `fill`
  Rat fill{3};
  Rat open_dur{5};
  Rat pour_dur{1};
  Rat shake_dur{2};
  Rat hold_lo{1}, hold_hi{10};
  Rat pack_dur{2};
  int fuses = 2;
  int matches = 2;
  Rat light_dur{8};
  Rat mend_dur{5};
};

struct Generated {
  std::string name;
  std::string domain;
  std::string problem;
};

namespace gen_detail {

inline Rat litres_of(const GenSpec& s, int i) {  // i is 1-based source index
  if (i - 1 < (int)s.litres.size()) return s.litres[i - 1];
  return s.fill;
}

inline std::string num(const Rat& r) { return rat_to_string(r); }

// The open action: uncaps the bottle, which re-caps itself after the
// duration. Named so it orders before pour/shake in the id-sorted pattern.
inline void emit_open_action(std::ostringstream& os, const Rat& dur) {
  os << "  (:durative-action open\n"
     << "    :parameters (?b - bottle)\n"
     << "    :duration (= ?duration " << num(dur) << ")\n"
     << "    :condition (and (at start (capped ?b)) (at end (not (capped ?b))))\n"
     << "    :effect (and (at start (not (capped ?b))) (at end (capped ?b))))\n";
}

inline void emit_pour_action(std::ostringstream& os, const Rat& dur) {
  os << "  (:durative-action pour\n"
     << "    :parameters (?i - source ?j - sink)\n"
     << "    :duration (= ?duration " << num(dur) << ")\n"
     << "    :condition (and (at start (not (capped ?i))) (at start (not (capped ?j)))\n"
     << "                    (at start (> (litres ?i) 0))\n"
     << "                    (over all (not (capped ?i))) (over all (not (capped ?j))))\n"
     << "    :effect (and (at start (decrease (litres ?i) 1))\n"
     << "                 (at end (increase (litres ?j) 1))))\n";
}

inline void emit_shake_action(std::ostringstream& os, const Rat& dur, const char* type) {
  os << "  (:durative-action shake\n"
     << "    :parameters (?b - " << type << ")\n"
     << "    :duration (= ?duration " << num(dur) << ")\n"
     << "    :condition (and (at start (> (litres ?b) 0))\n"
     << "                    (over all (not (capped ?b))))\n"
     << "    :effect (at start (decrease (litres ?b) 1)))\n";
}

inline void emit_hold_pack_actions(std::ostringstream& os, const GenSpec& s) {
  os << "  (:durative-action hold\n"
     << "    :parameters (?b - bottle)\n"
     << "    :duration (and (>= ?duration " << num(s.hold_lo) << ") (<= ?duration "
     << num(s.hold_hi) << "))\n"
     << "    :condition ()\n"
     << "    :effect (and (at start (held ?b)) (at end (not (held ?b)))))\n"
     << "  (:durative-action pack\n"
     << "    :parameters (?i - bottle ?j - bottle)\n"
     << "    :duration (= ?duration " << num(s.pack_dur) << ")\n"
     << "    :condition (and (at start (not (= ?i ?j)))\n"
     << "                    (at start (loose ?i)) (at start (loose ?j))\n"
     << "                    (over all (held ?i)) (over all (held ?j)))\n"
     << "    :effect (and (at start (not (loose ?i))) (at start (not (loose ?j)))\n"
     << "                 (at end (packed ?i)) (at end (packed ?j))))\n";
}

inline std::string bottles_objects(const GenSpec& s, bool typed_split) {
  std::ostringstream os;
  if (typed_split) {
    for (int i = 1; i <= s.p; ++i) os << "b" << i << " ";
    os << "- source ";
    for (int j = s.p + 1; j <= s.q; ++j) os << "b" << j << " ";
    os << "- sink";
  } else {
    for (int i = 1; i <= s.q; ++i) os << "b" << i << " ";
    os << "- bottle";
  }
  return os.str();
}

inline Generated gen_pour(const GenSpec& s) {
  std::ostringstream dom, prob;
  dom << "(define (domain pour)\n"
      << "  (:requirements :typing :fluents :durative-actions :negative-preconditions)\n"
      << "  (:types source sink - bottle)\n"
      << "  (:predicates (capped ?b - bottle))\n"
      << "  (:functions (litres ?b - bottle))\n";
  emit_open_action(dom, s.open_dur);
  emit_pour_action(dom, s.pour_dur);
  dom << ")\n";
  prob << "(define (problem pour-" << s.p << "-" << s.q << ")\n"
       << "  (:domain pour)\n"
       << "  (:objects " << bottles_objects(s, true) << ")\n"
       << "  (:init";
  for (int i = 1; i <= s.q; ++i) prob << " (capped b" << i << ")";
  prob << "\n        ";
  for (int i = 1; i <= s.q; ++i)
    prob << " (= (litres b" << i << ") " << (i <= s.p ? num(litres_of(s, i)) : "0") << ")";
  prob << ")\n  (:goal (and";
  for (int i = 1; i <= s.p; ++i) prob << " (= (litres b" << i << ") 0)";
  prob << "))\n)\n";
  return {"pour-" + std::to_string(s.p) + "-" + std::to_string(s.q), dom.str(), prob.str()};
}

inline Generated gen_shake(const GenSpec& s) {
  std::ostringstream dom, prob;
  dom << "(define (domain shake)\n"
      << "  (:requirements :typing :fluents :durative-actions :negative-preconditions)\n"
      << "  (:types bottle)\n"
      << "  (:predicates (capped ?b - bottle))\n"
      << "  (:functions (litres ?b - bottle))\n";
  emit_open_action(dom, s.open_dur);
  emit_shake_action(dom, s.shake_dur, "bottle");
  dom << ")\n";
  prob << "(define (problem shake-" << s.q << ")\n"
       << "  (:domain shake)\n"
       << "  (:objects " << bottles_objects(s, false) << ")\n"
       << "  (:init";
  for (int i = 1; i <= s.q; ++i) prob << " (capped b" << i << ")";
  prob << "\n        ";
  for (int i = 1; i <= s.q; ++i)
    prob << " (= (litres b" << i << ") " << num(litres_of(s, i)) << ")";
  prob << ")\n  (:goal (and";
  for (int i = 1; i <= s.q; ++i) prob << " (= (litres b" << i << ") 0)";
  prob << "))\n)\n";
  return {"shake-" + std::to_string(s.q), dom.str(), prob.str()};
}

inline Generated gen_pack(const GenSpec& s) {
  std::ostringstream dom, prob;
  dom << "(define (domain pack)\n"
      << "  (:requirements :typing :durative-actions :duration-inequalities"
         " :negative-preconditions :equality)\n"
      << "  (:types bottle)\n"
      << "  (:predicates (held ?b - bottle) (loose ?b - bottle) (packed ?b - bottle))\n";
  emit_hold_pack_actions(dom, s);
  dom << ")\n";
  prob << "(define (problem pack-" << s.q << ")\n"
       << "  (:domain pack)\n"
       << "  (:objects " << bottles_objects(s, false) << ")\n"
       << "  (:init";
  for (int i = 1; i <= s.q; ++i) prob << " (loose b" << i << ")";
  prob << ")\n  (:goal (and";
  for (int i = 1; i <= s.q; ++i) prob << " (packed b" << i << ")";
  prob << "))\n)\n";
  return {"pack-" + std::to_string(s.q), dom.str(), prob.str()};
}

// Union of pour, shake and pack on one bottle set.
inline Generated gen_bottles(const GenSpec& s) {
  std::ostringstream dom, prob;
  dom << "(define (domain bottles)\n"
      << "  (:requirements :typing :fluents :durative-actions :duration-inequalities"
         " :negative-preconditions :equality)\n"
      << "  (:types source sink - bottle)\n"
      << "  (:predicates (capped ?b - bottle) (held ?b - bottle) (loose ?b - bottle)"
         " (packed ?b - bottle))\n"
      << "  (:functions (litres ?b - bottle))\n";
  emit_open_action(dom, s.open_dur);
  emit_pour_action(dom, s.pour_dur);
  emit_shake_action(dom, s.shake_dur, "source");
  emit_hold_pack_actions(dom, s);
  dom << ")\n";
  prob << "(define (problem bottles-" << s.p << "-" << s.q << ")\n"
       << "  (:domain bottles)\n"
       << "  (:objects " << bottles_objects(s, true) << ")\n"
       << "  (:init";
  for (int i = 1; i <= s.q; ++i) prob << " (capped b" << i << ") (loose b" << i << ")";
  prob << "\n        ";
  for (int i = 1; i <= s.q; ++i)
    prob << " (= (litres b" << i << ") " << (i <= s.p ? num(litres_of(s, i)) : "0") << ")";
  prob << ")\n  (:goal (and";
  for (int i = 1; i <= s.p; ++i) prob << " (= (litres b" << i << ") 0)";
  if (s.q >= 2) prob << " (packed b1) (packed b2)";
  prob << "))\n)\n";
  return {"bottles-" + std::to_string(s.p) + "-" + std::to_string(s.q), dom.str(),
          prob.str()};
}

// Lasting-condition stress: mending a fuse needs a lit match for the whole
// mend, matches burn out, one free pair of hands.
inline Generated gen_matchcellar(const GenSpec& s) {
  std::ostringstream dom, prob;
  dom << "(define (domain matchcellar)\n"
      << "  (:requirements :typing :durative-actions :negative-preconditions)\n"
      << "  (:types match fuse)\n"
      << "  (:predicates (unused ?m - match) (lit ?m - match) (mended ?f - fuse)"
         " (handfree))\n"
      << "  (:durative-action light\n"
      << "    :parameters (?m - match)\n"
      << "    :duration (= ?duration " << num(s.light_dur) << ")\n"
      << "    :condition (at start (unused ?m))\n"
      << "    :effect (and (at start (not (unused ?m))) (at start (lit ?m))\n"
      << "                 (at end (not (lit ?m)))))\n"
      << "  (:durative-action mend\n"
      << "    :parameters (?f - fuse ?m - match)\n"
      << "    :duration (= ?duration " << num(s.mend_dur) << ")\n"
      << "    :condition (and (at start (handfree)) (over all (lit ?m)))\n"
      << "    :effect (and (at start (not (handfree)))\n"
      << "                 (at end (handfree)) (at end (mended ?f))))\n"
      << ")\n";
  prob << "(define (problem matchcellar-" << s.fuses << "-" << s.matches << ")\n"
       << "  (:domain matchcellar)\n"
       << "  (:objects";
  for (int m = 1; m <= s.matches; ++m) prob << " m" << m;
  prob << " - match";
  for (int f = 1; f <= s.fuses; ++f) prob << " f" << f;
  prob << " - fuse)\n  (:init (handfree)";
  for (int m = 1; m <= s.matches; ++m) prob << " (unused m" << m << ")";
  prob << ")\n  (:goal (and";
  for (int f = 1; f <= s.fuses; ++f) prob << " (mended f" << f << ")";
  prob << "))\n)\n";
  return {"matchcellar-" + std::to_string(s.fuses) + "-" + std::to_string(s.matches),
          dom.str(), prob.str()};
}

}  // namespace gen_detail

inline Generated generate_instance(const GenSpec& s) {
  if (s.family == "pour") return gen_detail::gen_pour(s);
  if (s.family == "shake") return gen_detail::gen_shake(s);
  if (s.family == "pack") return gen_detail::gen_pack(s);
  if (s.family == "bottles") return gen_detail::gen_bottles(s);
  if (s.family == "matchcellar") return gen_detail::gen_matchcellar(s);
  throw std::invalid_argument("unknown fixture family: " + s.family);
}

}  // namespace tpp

#endif  // TPP_GENERATORS_HPP
