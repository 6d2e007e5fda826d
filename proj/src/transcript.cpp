#include "diqpq/transcript.hpp"

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace diqpq {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<std::uint8_t> string_to_bits(const std::string& s) {
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw std::runtime_error("transcript: bad bit character");
        bits.push_back(c == '1' ? 1 : 0);
    }
    return bits;
}

std::string knowledge_to_string(const std::vector<AliceKnowledge>& ks) {
    std::string s;
    s.reserve(ks.size());
    for (auto k : ks) {
        s.push_back(k == AliceKnowledge::Inconclusive ? '.'
                    : k == AliceKnowledge::Zero       ? '0'
                                                      : '1');
    }
    return s;
}

std::vector<AliceKnowledge> string_to_knowledge(const std::string& s) {
    std::vector<AliceKnowledge> ks;
    ks.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '.': ks.push_back(AliceKnowledge::Inconclusive); break;
            case '0': ks.push_back(AliceKnowledge::Zero); break;
            case '1': ks.push_back(AliceKnowledge::One); break;
            default: throw std::runtime_error("transcript: bad knowledge character");
        }
    }
    return ks;
}

[[noreturn]] void bad_line(const std::string& line) {
    throw std::runtime_error("transcript: malformed line '" + line + "'");
}

}  // namespace

void write_transcript(std::ostream& out, const Transcript& t) {
    out << "DIQPQ-TRANSCRIPT v" << kTranscriptVersion << '\n';
    out << "param theta_rad " << fmt_double(t.params.angles.theta) << '\n';
    out << "param psi1_rad " << fmt_double(t.params.angles.psi1) << '\n';
    out << "param psi2_rad " << fmt_double(t.params.angles.psi2) << '\n';
    out << "param gamma " << fmt_double(t.params.gamma) << '\n';
    out << "param pairs " << t.params.pairs << '\n';
    out << "param eta " << fmt_double(t.params.detector.eta) << '\n';
    out << "param eps_chsh " << fmt_double(t.params.eps_chsh) << '\n';
    out << "param eps_qpq " << fmt_double(t.params.eps_qpq) << '\n';
    out << "param loss " << fmt_double(t.params.loss) << '\n';
    out << "param seed " << t.params.seed << '\n';
    out << "meta method " << (t.method == CertMethod::Game ? "game" : "test") << '\n';
    out << "meta threshold "
        << (t.threshold_mode == ThresholdMode::Ideal ? "ideal" : "eta") << '\n';
    out << "meta source " << t.source_kind << ' ' << fmt_double(t.source_eps) << '\n';
    out << "meta clicks " << t.click_kind << '\n';
    out << "meta agreed_eps " << fmt_double(t.agreed_eps) << '\n';
    out << "stat observed " << fmt_double(t.observed_stat) << '\n';
    out << "stat reference " << fmt_double(t.reference_stat) << '\n';
    out << "stat margin " << fmt_double(t.margin) << '\n';
    out << "records " << t.chsh_records.size() << '\n';
    for (const auto& r : t.chsh_records) {
        out << "r " << r.index << ' ' << r.x << ' ' << r.y << ' ' << r.a << ' ' << r.b << ' '
            << (r.bob_clicked() ? 1 : 0) << ' ' << (r.alice_clicked() ? 1 : 0) << '\n';
    }
    out << "verdict " << (t.verdict == Verdict::Proceed ? "proceed" : "abort");
    if (t.verdict == Verdict::Abort) {
        out << ' '
            << (t.abort_reason == AbortReason::InsufficientData ? "insufficient-data"
                                                                : "statistic-below-threshold");
    }
    out << '\n';
    if (t.raw_key) {
        out << "rawkey_bob " << bits_to_string(t.raw_key->bob_bits) << '\n';
        out << "rawkey_alice " << knowledge_to_string(t.raw_key->alice_known) << '\n';
    }
    if (t.final_key) {
        out << "finalkey_block " << t.final_key->block_size << '\n';
        out << "finalkey_bob " << bits_to_string(t.final_key->bob_bits) << '\n';
        out << "finalkey_known " << bits_to_string(t.final_key->alice_knows) << '\n';
    }
    if (t.key_attempts > 0) out << "key_attempts " << t.key_attempts << '\n';
    if (t.query && t.alice_index) {
        out << "query " << *t.alice_index << ' ' << t.query->known_position << ' '
            << t.query->shift << ' ' << t.query->retrieved_bit << '\n';
    }
}

std::string serialize_transcript(const Transcript& t) {
    std::ostringstream out;
    write_transcript(out, t);
    return out.str();
}

Transcript parse_transcript(std::istream& in) {
    Transcript t;
    std::string line;
    if (!std::getline(in, line) || line != "DIQPQ-TRANSCRIPT v1") {
        throw std::runtime_error("transcript: missing or unsupported header");
    }
    std::uint64_t expected_records = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "param") {
            std::string key;
            ls >> key;
            if (key == "pairs") {
                ls >> t.params.pairs;
            } else if (key == "seed") {
                ls >> t.params.seed;
            } else {
                double v = 0.0;
                ls >> v;
                if (key == "theta_rad") t.params.angles.theta = v;
                else if (key == "psi1_rad") t.params.angles.psi1 = v;
                else if (key == "psi2_rad") t.params.angles.psi2 = v;
                else if (key == "gamma") t.params.gamma = v;
                else if (key == "eta") t.params.detector.eta = v;
                else if (key == "eps_chsh") t.params.eps_chsh = v;
                else if (key == "eps_qpq") t.params.eps_qpq = v;
                else if (key == "loss") t.params.loss = v;
                else bad_line(line);
            }
        } else if (tag == "meta") {
            std::string key;
            ls >> key;
            if (key == "method") {
                std::string v;
                ls >> v;
                t.method = v == "game" ? CertMethod::Game : CertMethod::Test;
            } else if (key == "threshold") {
                std::string v;
                ls >> v;
                t.threshold_mode =
                    v == "ideal" ? ThresholdMode::Ideal : ThresholdMode::EtaCorrected;
            } else if (key == "source") {
                ls >> t.source_kind >> t.source_eps;
            } else if (key == "clicks") {
                ls >> t.click_kind;
            } else if (key == "agreed_eps") {
                ls >> t.agreed_eps;
            } else {
                bad_line(line);
            }
        } else if (tag == "stat") {
            std::string key;
            double v = 0.0;
            ls >> key >> v;
            if (key == "observed") t.observed_stat = v;
            else if (key == "reference") t.reference_stat = v;
            else if (key == "margin") t.margin = v;
            else bad_line(line);
        } else if (tag == "records") {
            ls >> expected_records;
            t.chsh_records.reserve(expected_records);
        } else if (tag == "r") {
            TrialRecord r;
            int ca = 0, cb = 0;
            ls >> r.index >> r.x >> r.y >> r.a >> r.b >> ca >> cb;
            if (!ls) bad_line(line);
            t.chsh_records.push_back(r);
        } else if (tag == "verdict") {
            std::string v;
            ls >> v;
            if (v == "proceed") {
                t.verdict = Verdict::Proceed;
            } else {
                t.verdict = Verdict::Abort;
                std::string reason;
                ls >> reason;
                t.abort_reason = reason == "insufficient-data"
                                     ? AbortReason::InsufficientData
                                     : AbortReason::StatisticBelowThreshold;
            }
        } else if (tag == "rawkey_bob") {
            std::string bits;
            ls >> bits;
            if (!t.raw_key) t.raw_key.emplace();
            t.raw_key->bob_bits = string_to_bits(bits);
        } else if (tag == "rawkey_alice") {
            std::string chars;
            ls >> chars;
            if (!t.raw_key) t.raw_key.emplace();
            t.raw_key->alice_known = string_to_knowledge(chars);
        } else if (tag == "finalkey_block") {
            if (!t.final_key) t.final_key.emplace();
            ls >> t.final_key->block_size;
        } else if (tag == "finalkey_bob") {
            std::string bits;
            ls >> bits;
            if (!t.final_key) t.final_key.emplace();
            t.final_key->bob_bits = string_to_bits(bits);
        } else if (tag == "finalkey_known") {
            std::string bits;
            ls >> bits;
            if (!t.final_key) t.final_key.emplace();
            t.final_key->alice_knows = string_to_bits(bits);
        } else if (tag == "key_attempts") {
            ls >> t.key_attempts;
        } else if (tag == "query") {
            QueryResult q;
            std::uint64_t index = 0;
            ls >> index >> q.known_position >> q.shift >> q.retrieved_bit;
            if (!ls) bad_line(line);
            t.alice_index = index;
            t.query = q;
        } else {
            bad_line(line);
        }
    }
    if (t.chsh_records.size() != expected_records) {
        throw std::runtime_error("transcript: record count mismatch");
    }
    return t;
}

Transcript parse_transcript_string(const std::string& text) {
    std::istringstream in(text);
    return parse_transcript(in);
}

}  // namespace diqpq
