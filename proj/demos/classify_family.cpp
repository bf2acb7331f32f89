// Classifies the rotation and shift models of a few periodic sequences on
// the binary tree and prints the certified Perron-root enclosures.

#include <cstdio>

#include "rotor/tree.hpp"

using namespace rotor;

int main() {
    const char* family[] = {"(012)", "(001122)", "(010122)", "(012021)"};
    for (const char* text : family) {
        RotorSequence s = RotorSequence::parse(text, 2);
        auto rotation = tree::classify_tree_balanced(SupportDistribution::rotation_model(s));
        auto pieces = tree::classify_uniform_rotation(s);
        auto shift = tree::classify_uniform_shift(s);
        std::printf("%-10s rotation: %-9s (rho in [%.9f, %.9f], pieces say %s)  shift: %s\n",
                    text, to_string(rotation.verdict), rotation.rho.lo.to_double(),
                    rotation.rho.hi.to_double(), to_string(pieces),
                    tree::to_string(shift.verdict));
    }
    return 0;
}
