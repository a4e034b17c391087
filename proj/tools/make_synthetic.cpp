#include <iostream>

#include "CLI11.hpp"

#include "patentsum/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write the planted-relevance synthetic collection"};
    patentsum::SyntheticSpec spec;
    std::string out = "data/synthetic";
    app.add_option("--out", out, "Output directory");
    app.add_option("--seed", spec.seed, "Generator seed");
    app.add_option("--topics", spec.topics, "Number of topics");
    app.add_option("--relevant", spec.relevant_per_topic, "Relevant documents per topic");
    app.add_option("--documents", spec.documents, "Total documents");
    CLI11_PARSE(app, argc, argv);

    try {
        auto collection = patentsum::make_planted_collection(spec);
        patentsum::write_collection(out, collection);
        std::cerr << "wrote " << collection.documents.size() << " documents and " << collection.topics.size()
                  << " topics to " << out << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
