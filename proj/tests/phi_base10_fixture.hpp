#pragma once

#include "ostra/automata.hpp"

// 97-state reference DFAO: on the Zeckendorf representation of 10^n it
// outputs the n'th decimal digit of the golden ratio after the point.
// Transcribed row by row; -1 marks an implied dead transition.
//
// The printed table carries one misprint: rows 15 and 48 are identical
// (24, 25, 2), which is impossible in a minimal automaton, and the
// automaton as printed returns 3 instead of 2 on the representation of
// 68199.  The unique single-transition repair is delta(48,1) = 45; the
// repaired table is behaviorally equal to the pipeline's automaton on
// every valid input.  phi_base10_reference() returns the table as
// printed; phi_base10_corrected() applies the repair.
inline ostra::Dfao phi_base10_reference() {
    // {delta(q,0), delta(q,1), tau(q)}
    static const int table[97][3] = {
        {0, 1, 0},    {2, -1, 6},   {3, 4, 2},    {5, 6, 8},    {7, -1, 4},
        {8, 9, 0},    {10, -1, 7},  {11, 12, 3},  {13, 14, 9},  {15, -1, 5},
        {16, 17, 1},  {18, 19, 7},  {20, -1, 4},  {21, 22, 0},  {23, -1, 6},
        {24, 25, 2},  {26, 27, 8},  {28, -1, 5},  {29, 30, 1},  {31, -1, 7},
        {32, 33, 3},  {34, 14, 9},  {35, -1, 5},  {36, 37, 2},  {38, 39, 8},
        {40, 0, 4},   {41, 42, 0},  {43, -1, 6},  {44, 45, 3},  {46, 47, 9},
        {48, -1, 5},  {49, 50, 1},  {51, 52, 7},  {53, -1, 3},  {54, 55, 0},
        {56, 4, 2},   {5, 57, 8},   {58, -1, 4},  {59, 9, 1},   {60, -1, 7},
        {61, 12, 3},  {62, 14, 9},  {63, -1, 5},  {64, 65, 1},  {66, 67, 8},
        {68, -1, 4},  {41, 69, 0},  {70, -1, 6},  {24, 25, 2},  {46, 27, 9},
        {71, -1, 5},  {72, 30, 1},  {73, -1, 7},  {32, 74, 3},  {75, 1, 9},
        {35, -1, 6},  {76, 6, 8},   {77, -1, 7},  {78, 12, 3},  {79, 47, 9},
        {80, 17, 1},  {51, 19, 7},  {81, 55, 0},  {24, 4, 2},   {26, 82, 8},
        {83, -1, 4},  {29, 9, 1},   {84, -1, 7},  {61, 85, 3},  {86, -1, 5},
        {87, 37, 2},  {88, 45, 2},  {46, 89, 9},  {72, 50, 1},  {90, -1, 3},
        {54, 1, 0},   {91, 9, 0},   {16, 92, 1},  {18, 19, 8},  {41, 22, 0},
        {46, 27, 8},  {34, 1, 9},   {77, -1, 6},  {44, 12, 3},  {80, 50, 1},
        {53, -1, 4},  {93, 4, 2},   {94, 82, 8},  {38, 67, 8},  {95, -1, 6},
        {96, 74, 3},  {13, 47, 9},  {83, -1, 5},  {76, 39, 8},  {8, 42, 0},
        {87, 65, 2},  {73, 52, 7},
    };
    ostra::Dfao a;
    a.alphabet = ostra::Alphabet::uniform(1, 2);
    a.start = 0;
    a.output.resize(97);
    a.next.assign(97, std::vector<int>(2, ostra::kDead));
    for (int q = 0; q < 97; ++q) {
        a.next[q][0] = table[q][0];
        a.next[q][1] = table[q][1];
        a.output[q] = table[q][2];
    }
    a.check();
    return a;
}

inline ostra::Dfao phi_base10_corrected() {
    ostra::Dfao a = phi_base10_reference();
    a.next[48][1] = 45;
    return a;
}
