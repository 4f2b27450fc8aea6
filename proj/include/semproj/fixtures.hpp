// Bundled example data: the "Kim promised to be on time" bi-sentence and a
// five-sentence English-German toy corpus with gold target roles.
#pragma once

#include <string>

#include "semproj/corpus.hpp"

namespace semproj::fixtures {

struct CorpusFiles {
  std::string src_trees;
  std::string tgt_trees;
  std::string align;
  std::string src_roles;
  std::string tgt_roles;  // gold
};

inline CorpusFiles figure1() {
  return {
      "(S (NP (NNP Kim)) (VP (VBD promised) (VP (TO to) (VP (VB be) (PP (IN on) (NN time))))))\n",
      "(S (NP (NE Kim)) (VVFIN versprach) ($, ,) (S (ADJD pünktlich) (PTKZU zu) (VVINF kommen)))\n",
      "0-0 1-1 2-4 5-3\n",
      "#1 COMMITMENT 1\nSPEAKER\t0-0\nMESSAGE\t2-5\n",
      "#1 COMMITMENT 1\nSPEAKER\t0-0\nMESSAGE\t3-5\n",
  };
}

inline CorpusFiles toy_corpus() {
  CorpusFiles f;
  f.src_trees =
      "(S (NP (NNP Mary)) (VP (VBD accepted) (NP (DT the) (NN gift))))\n"
      "(S (NP (NNP Kim)) (VP (VBD promised) (VP (TO to) (VP (VB be) (PP (IN on) (NN time))))))\n"
      "(S (NP (DT The) (NN committee)) (VP (VBD rejected) (NP (DT the) (NN proposal)) (NP (NN yesterday))))\n"
      "(S (NP (PRP We)) (VP (VBP support) (NP (DT this) (NN report))))\n"
      "(S (NP (DT The) (NN minister)) (VP (VBD answered) (NP (DT the) (NN question)) (ADVP (RB quickly))))\n";
  f.tgt_trees =
      "(S (NP (NE Maria)) (VVFIN nahm) (NP (ART das) (NN Geschenk)) (PTKVZ an))\n"
      "(S (NP (NE Kim)) (VVFIN versprach) ($, ,) (S (ADJD pünktlich) (PTKZU zu) (VVINF kommen)))\n"
      "(S (NP (ART Der) (NN Ausschuss)) (VVFIN lehnte) (ADV gestern) (NP (ART den) (NN Vorschlag)) (PTKVZ ab))\n"
      "(S (NP (PPER Wir)) (VVFIN unterstützen) (NP (PDAT diesen) (NN Bericht)))\n"
      "(S (NP (ART Der) (NN Minister)) (VVFIN beantwortete) (ADJD schnell) (NP (ART die) (NN Frage)))\n";
  f.align =
      "0-0 1-1 1-4 2-2 3-3\n"
      "0-0 1-1 2-4 5-3\n"
      "0-0 1-1 2-2 2-6 3-4 4-5 5-3\n"
      "0-0 1-1 3-3\n"
      "0-0 1-1 2-2 4-5 5-3\n";
  f.src_roles =
      "#1 RECEIVING 1\nRECIPIENT\t0-0\nTHEME\t2-3\n"
      "\n"
      "#2 COMMITMENT 1\nSPEAKER\t0-0\nMESSAGE\t2-5\n"
      "\n"
      "#3 JUDGMENT_COMMUNICATION 2\nCOMMUNICATOR\t0-1\nEVALUEE\t3-4\nTIME\t5-5\n"
      "\n"
      "#4 SUPPORTING 1\nSUPPORTER\t0-0\nSUPPORTED\t2-3\n"
      "\n"
      "#5 COMMUNICATION_RESPONSE 2\nSPEAKER\t0-1\nMESSAGE\t3-4\nMANNER\t5-5\n";
  f.tgt_roles =
      "#1 RECEIVING 1\nRECIPIENT\t0-0\nTHEME\t2-3\n"
      "\n"
      "#2 COMMITMENT 1\nSPEAKER\t0-0\nMESSAGE\t3-5\n"
      "\n"
      "#3 JUDGMENT_COMMUNICATION 2\nCOMMUNICATOR\t0-1\nEVALUEE\t4-5\nTIME\t3-3\n"
      "\n"
      "#4 SUPPORTING 1\nSUPPORTER\t0-0\nSUPPORTED\t2-3\n"
      "\n"
      "#5 COMMUNICATION_RESPONSE 2\nSPEAKER\t0-1\nMESSAGE\t4-5\nMANNER\t3-3\n";
  return f;
}

}  // namespace semproj::fixtures
