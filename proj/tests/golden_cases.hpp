#pragma once

// Three worked examples whose winners were tallied by hand for all sixteen
// rules. They exercise majority ties, cycles, multi-way eliminations and
// runoff tie handling. Shared between the rule unit tests and the
// acceptance gate.

#include <map>

#include "votelab/rules.hpp"

namespace golden {

struct Golden {
    const char* profile;
    std::map<votelab::RuleId, votelab::WinningSet> expect;
};

inline const std::array<Golden, 3>& cases() {
    using votelab::RuleId;
    static const std::array<Golden, 3> kGolden = {{
        {"5;8;0,1,4,3,2|4,1,3,0,2|3,1,2,4,0|0,2,1,4,3|4,1,2,0,3|1,0,4,2,3|4,0,2,3,1|0,1,3,4,2",
         {
             {RuleId::plurality, {0, 4}},
             {RuleId::borda, {1}},
             {RuleId::anti_plurality, {4}},
             {RuleId::copeland, {1}},
             {RuleId::llull, {0, 1}},
             {RuleId::uncovered_set, {0, 1}},
             {RuleId::top_cycle, {0, 1, 4}},
             {RuleId::banks, {0, 1}},
             {RuleId::stable_voting, {1}},
             {RuleId::blacks, {1}},
             {RuleId::instant_runoff_tb, {4}},
             {RuleId::plurality_w_runoff_put, {0, 4}},
             {RuleId::coombs, {0, 1}},
             {RuleId::baldwin, {0, 1}},
             {RuleId::weak_nanson, {1}},
             {RuleId::kemeny_young, {0, 1}},
         }},
        {"5;7;0,4,3,1,2|1,3,2,0,4|2,4,0,3,1|4,2,3,0,1|1,2,0,3,4|1,2,0,3,4|3,4,1,2,0",
         {
             {RuleId::plurality, {1}},
             {RuleId::borda, {2}},
             {RuleId::anti_plurality, {3}},
             {RuleId::copeland, {2}},
             {RuleId::llull, {2}},
             {RuleId::uncovered_set, {1, 2, 3}},
             {RuleId::top_cycle, {0, 1, 2, 3, 4}},
             {RuleId::banks, {1, 2, 3}},
             {RuleId::stable_voting, {1, 3}},
             {RuleId::blacks, {2}},
             {RuleId::instant_runoff_tb, {4}},
             // Plurality top is 1 alone (3 firsts); every other alternative
             // ties on one first, so the runoff partner ranges over all of
             // them. By the tallied duels 1 beats 0 (4-3) and 2 (5-2) but
             // loses to 3 (3-4) and 4 (3-4), so the universe union is
             // {1,3,4}.
             {RuleId::plurality_w_runoff_put, {1, 3, 4}},
             {RuleId::coombs, {2}},
             {RuleId::baldwin, {3}},
             {RuleId::weak_nanson, {1}},
             {RuleId::kemeny_young, {1}},
         }},
        {"4;4;2,3,0,1|1,3,0,2|1,3,2,0|2,0,1,3",
         {
             {RuleId::plurality, {1, 2}},
             {RuleId::borda, {1, 2}},
             {RuleId::anti_plurality, {0, 1, 2, 3}},
             {RuleId::copeland, {1, 2}},
             {RuleId::llull, {1, 2}},
             {RuleId::uncovered_set, {1, 2}},
             {RuleId::top_cycle, {0, 1, 2, 3}},
             {RuleId::banks, {1, 2, 3}},
             {RuleId::stable_voting, {1, 2}},
             {RuleId::blacks, {1, 2}},
             {RuleId::instant_runoff_tb, {2}},
             {RuleId::plurality_w_runoff_put, {1, 2}},
             {RuleId::coombs, {0, 1, 2, 3}},
             {RuleId::baldwin, {1, 2}},
             {RuleId::weak_nanson, {1, 2}},
             {RuleId::kemeny_young, {1, 2}},
         }},
    }};
    return kGolden;
}

}  // namespace golden
