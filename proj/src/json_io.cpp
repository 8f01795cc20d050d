#include "cf/json_io.hpp"

namespace cf {

json to_json(const BehaviorTable& bt) {
  json p = json::array();
  for (int a = 0; a < 2; ++a) {
    json ja = json::array();
    for (int b = 0; b < 2; ++b) {
      json jb = json::array();
      for (int x = 0; x < 2; ++x) {
        json jx = json::array();
        for (int y = 0; y < 2; ++y) jx.push_back(bt.p[a][b][x][y]);
        jb.push_back(jx);
      }
      ja.push_back(jb);
    }
    p.push_back(ja);
  }
  return json{{"p", p}};
}

BehaviorTable behavior_from_json(const json& j) {
  const json* root = &j;
  // Accept either a bare behavior object or a report embedding one.
  if (j.is_object() && j.contains("behavior")) root = &j.at("behavior");
  if (!root->is_object() || !root->contains("p")) {
    throw std::invalid_argument(
        "behavior JSON must be an object with a 'p' table");
  }
  const json& p = root->at("p");
  BehaviorTable bt;
  try {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y)
            bt.p[a][b][x][y] = p.at(a).at(b).at(x).at(y).get<double>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(
        std::string("behavior JSON has the wrong shape: ") + e.what());
  }
  return bt;
}

json to_json(const JointTable& t) {
  json p = json::array();
  for (int c = 0; c < 2; ++c) {
    json jc = json::array();
    for (int a = 0; a < 2; ++a) {
      json ja = json::array();
      for (int d = 0; d < 2; ++d) {
        json jd = json::array();
        for (int b = 0; b < 2; ++b) {
          json jb = json::array();
          for (int x = 0; x < 2; ++x) {
            json jx = json::array();
            for (int y = 0; y < 2; ++y) jx.push_back(t.v[c][a][d][b][x][y]);
            jb.push_back(jx);
          }
          jd.push_back(jb);
        }
        ja.push_back(jd);
      }
      jc.push_back(ja);
    }
    p.push_back(jc);
  }
  return json{{"p", p}};
}

json to_json(const MarginalBundle& b) {
  json pcd = json::array();
  for (int c = 0; c < 2; ++c) {
    json jc = json::array();
    for (int d = 0; d < 2; ++d) {
      json jd = json::array();
      for (int x = 0; x < 2; ++x) {
        json jx = json::array();
        for (int y = 0; y < 2; ++y) jx.push_back(b.pcd.v[c][d][x][y]);
        jd.push_back(jx);
      }
      jc.push_back(jd);
    }
    pcd.push_back(jc);
  }
  json pa = json::array();
  for (int a = 0; a < 2; ++a) {
    json ja = json::array();
    for (int x = 0; x < 2; ++x) {
      json jx = json::array();
      for (int c = 0; c < 2; ++c) jx.push_back(b.pa[a][x][c]);
      ja.push_back(jx);
    }
    pa.push_back(ja);
  }
  json pb = json::array();
  for (int bo = 0; bo < 2; ++bo) {
    json jb = json::array();
    for (int y = 0; y < 2; ++y) {
      json jy = json::array();
      for (int c = 0; c < 2; ++c) {
        json jc = json::array();
        for (int d = 0; d < 2; ++d) jc.push_back(b.pb[bo][y][c][d]);
        jy.push_back(jc);
      }
      jb.push_back(jy);
    }
    pb.push_back(jb);
  }
  return json{{"pcd", pcd}, {"pa", pa}, {"pb", pb}};
}

json to_json(const AssumptionReport& rep) {
  json j{{"predicate", rep.predicate},
         {"verdict", verdict_name(rep.verdict)},
         {"deviation", rep.deviation},
         {"indeterminate_count", rep.indeterminate_count}};
  if (rep.witness) j["witness"] = *rep.witness;
  return j;
}

json to_json(const MembershipCertificate& cert) {
  json j{{"verdict", cert.inside ? "inside" : "outside"}};
  if (cert.inside) {
    j["weights"] = cert.weights;
  } else {
    j["facet"] = json{{"coefficients", cert.facet->coeff},
                      {"bound", cert.facet->bound},
                      {"value", cert.facet->value},
                      {"chsh_equivalent", cert.facet->chsh_equivalent}};
  }
  return j;
}

json to_json(const SignallingReport& rep) {
  return json{{"a_marginal_independent_of_y", rep.a_marginal_ok},
              {"b_marginal_independent_of_x", rep.b_marginal_ok},
              {"a_marginal_deviation", rep.a_deviation},
              {"b_marginal_deviation", rep.b_deviation}};
}

json to_json(const NoSignallingReport& rep) {
  return json{{"past_ok", rep.past_ok},
              {"past_deviation", rep.past_deviation},
              {"future_ok", rep.future_ok},
              {"future_deviation", rep.future_deviation}};
}

json to_json(const TimeSymmetryReport& rep) {
  return json{{"symmetric", rep.symmetric},
              {"max_deviation", rep.max_deviation}};
}

json to_json(const BlochVector& n) { return json::array({n.x, n.y, n.z}); }

}  // namespace cf
