#include "taskrisk/corpus.hpp"

namespace taskrisk {

// Reconstruction: the selection below follows the three broad feature groups
// (engineering bottlenecks, routine work, hazardous context) using O*NET
// content-model element ids. It is not the exact list used in any published study.
AttributeCatalog default_catalog() {
    using C = AttributeCategory;
    return AttributeCatalog({
        // engineering bottlenecks: social and creative intelligence, judgment
        {"2.A.1.d", C::Bottleneck, "Speaking"},
        {"2.A.2.a", C::Bottleneck, "Critical Thinking"},
        {"2.A.2.b", C::Bottleneck, "Active Learning"},
        {"2.A.2.d", C::Bottleneck, "Monitoring"},
        {"2.B.1.a", C::Bottleneck, "Social Perceptiveness"},
        {"2.B.1.b", C::Bottleneck, "Coordination"},
        {"2.B.1.c", C::Bottleneck, "Persuasion"},
        {"2.B.1.d", C::Bottleneck, "Negotiation"},
        {"2.B.1.e", C::Bottleneck, "Instructing"},
        {"2.B.1.f", C::Bottleneck, "Service Orientation"},
        {"2.B.2.i", C::Bottleneck, "Complex Problem Solving"},
        {"2.B.3.a", C::Bottleneck, "Operations Analysis"},
        {"2.B.3.b", C::Bottleneck, "Technology Design"},
        {"2.B.4.e", C::Bottleneck, "Judgment and Decision Making"},
        {"2.B.5.d", C::Bottleneck, "Management of Personnel Resources"},
        {"1.A.1.b.1", C::Bottleneck, "Fluency of Ideas"},
        {"1.A.1.b.2", C::Bottleneck, "Originality"},
        {"1.A.1.b.3", C::Bottleneck, "Problem Sensitivity"},
        {"1.A.1.b.4", C::Bottleneck, "Deductive Reasoning"},
        {"1.A.1.b.5", C::Bottleneck, "Inductive Reasoning"},
        {"4.A.2.b.1", C::Bottleneck, "Making Decisions and Solving Problems"},
        {"4.A.2.b.2", C::Bottleneck, "Thinking Creatively"},
        {"4.A.4.a.4", C::Bottleneck, "Establishing and Maintaining Interpersonal Relationships"},
        {"4.A.4.a.5", C::Bottleneck, "Assisting and Caring for Others"},
        {"4.A.4.a.7", C::Bottleneck, "Resolving Conflicts and Negotiating with Others"},
        {"4.A.4.b.1", C::Bottleneck, "Coordinating the Work and Activities of Others"},
        {"4.A.4.b.4", C::Bottleneck, "Guiding, Directing, and Motivating Subordinates"},
        // routine and repetitive work
        {"1.A.1.e.3", C::Routine, "Perceptual Speed"},
        {"1.A.2.a.1", C::Routine, "Arm-Hand Steadiness"},
        {"1.A.2.a.2", C::Routine, "Manual Dexterity"},
        {"1.A.2.a.3", C::Routine, "Finger Dexterity"},
        {"1.A.2.b.1", C::Routine, "Control Precision"},
        {"1.A.2.b.2", C::Routine, "Multilimb Coordination"},
        {"1.A.4.a.1", C::Routine, "Near Vision"},
        {"1.A.4.a.5", C::Routine, "Depth Perception"},
        {"4.A.3.a.2", C::Routine, "Handling and Moving Objects"},
        {"4.A.3.a.3", C::Routine, "Controlling Machines and Processes"},
        {"4.C.2.d.1.i", C::Routine, "Spend Time Making Repetitive Motions"},
        {"4.C.3.b.7", C::Routine, "Importance of Repeating Same Tasks"},
        {"4.C.3.b.8", C::Routine, "Structured versus Unstructured Work"},
        {"4.C.3.d.3", C::Routine, "Pace Determined by Speed of Equipment"},
        // hazardous context
        {"4.C.2.b.1.b", C::Hazard, "Very Hot or Cold Temperatures"},
        {"4.C.2.b.1.e", C::Hazard, "Exposed to Contaminants"},
        {"4.C.2.c.1.b", C::Hazard, "Exposed to Radiation"},
        {"4.C.2.c.1.d", C::Hazard, "Exposed to Hazardous Equipment"},
    });
}

}  // namespace taskrisk
